//! Self-dual double- and four-negacirculant codes over finite fields.
//!
//! The crate covers the whole pipeline: exact finite-field and polynomial
//! arithmetic, the three-factor classification of `x^{2p} + 1`, the CRT
//! decomposition of `F_q[x]/(x^n + 1)`, exhaustive and constructive censuses
//! of self-dual codes, minimum-distance enumeration and the entropy bounds.

pub mod arith;
pub mod bounds;
pub mod census;
pub mod classify;
pub mod error;
pub mod field;
pub mod matrix;
pub mod nega;
pub mod poly;
pub mod report;
pub mod survey;

pub use error::{Error, Result};
pub use field::{make_field, Field, FieldElement, FieldSpec};
pub use poly::{FactorizationResult, Poly};
pub use classify::{classify, verify_report, ClassificationReport, FactorCase, TheoremChecks};
pub use matrix::Matrix;
pub use nega::{build_double, build_four, min_distance, nega_matrix, prime_map, DoubleNegaCode, FourNegaCode, LinearCode};
pub use census::{census_double, census_four, containment_count, make_crt_context, CensusReport, CrtContext, DoubleMode, FourMode};
pub use survey::{survey, Survey, SurveyRow, SurveySummary};
pub use report::{Envelope, RunConfig, SCHEMA_VERSION};

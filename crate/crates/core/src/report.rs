//! Serialized forms of every result: a versioned JSON envelope carrying the
//! run configuration, and CSV tables for surveys.
//!
//! Polynomials are written in ascending-coefficient text form (`"1,5,1"` for
//! `1 + 5x + x^2`); coefficients in extension fields are `;`-joined residues.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::GoodIntegerVerdict;
use crate::classify::{ClassificationReport, FactorCase, TheoremChecks};
use crate::error::{Error, Result};
use crate::field::{field_of_order, Field};
use crate::poly::{FactorizationResult, Poly};
use crate::survey::{Survey, SurveyRow};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    pub workers: usize,
    pub output: Option<String>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub config: RunConfig,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(config: RunConfig, result: T) -> Self {
        Envelope { schema_version: SCHEMA_VERSION, config, result }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Parses an envelope, rejecting unknown schema versions.
pub fn parse_envelope<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Envelope<T>> {
    let env: Envelope<T> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema_version {}", env.schema_version)));
    }
    Ok(env)
}

/// `BigUint` as a decimal string.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(|| D::Error::custom(format!("bad integer {text:?}")))
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|text| {
                    BigUint::parse_bytes(text.as_bytes(), 10)
                        .ok_or_else(|| D::Error::custom(format!("bad integer {text:?}")))
                })
                .transpose()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub poly: String,
    pub degree: usize,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationDoc {
    pub q: u64,
    pub leading: String,
    pub factors: Vec<FactorDoc>,
}

impl FactorizationDoc {
    pub fn from_result(r: &FactorizationResult) -> Self {
        let field = r.leading.field();
        FactorizationDoc {
            q: field.order() as u64,
            leading: field.format_raw(r.leading.raw(), ';'),
            factors: r
                .factors
                .iter()
                .map(|(g, m)| FactorDoc { poly: g.to_text(), degree: g.degree().unwrap_or(0), multiplicity: *m })
                .collect(),
        }
    }

    pub fn to_result(&self) -> Result<FactorizationResult> {
        let field = field_of_order(self.q)?;
        let leading = field.element(field.parse_raw(&self.leading, ';')?)?;
        let factors = self
            .factors
            .iter()
            .map(|f| Ok((Poly::parse(&field, &f.poly)?, f.multiplicity)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FactorizationResult { leading, factors })
    }
}

/// `factor` output: the input polynomial and its factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReportDoc {
    pub q: u64,
    pub poly: String,
    pub factorization: FactorizationDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDoc {
    pub p: u64,
    pub q: u64,
    pub n: usize,
    pub ord_p_q: u64,
    pub ord_4p_q: u64,
    pub checks: TheoremChecks,
    pub case: FactorCase,
    pub g1: Option<String>,
    pub g2: Option<String>,
    pub factors: FactorizationDoc,
    pub oddly_good: GoodIntegerVerdict,
}

impl ClassificationDoc {
    pub fn from_report(r: &ClassificationReport) -> Self {
        ClassificationDoc {
            p: r.p,
            q: r.q,
            n: r.n,
            ord_p_q: r.ord_p_q,
            ord_4p_q: r.ord_4p_q,
            checks: r.checks,
            case: r.case,
            g1: r.g1().map(Poly::to_text),
            g2: r.g2().map(Poly::to_text),
            factors: FactorizationDoc::from_result(&r.factors),
            oddly_good: r.oddly_good.clone(),
        }
    }

    pub fn to_report(&self) -> Result<ClassificationReport> {
        Ok(ClassificationReport {
            p: self.p,
            q: self.q,
            n: self.n,
            ord_p_q: self.ord_p_q,
            ord_4p_q: self.ord_4p_q,
            checks: self.checks,
            factors: self.factors.to_result()?,
            case: self.case,
            oddly_good: self.oddly_good.clone(),
        })
    }
}

/// A code given by `(n, q)` and its defining polynomials, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub kind: String,
    pub n: usize,
    pub q: u64,
    pub polys: Vec<String>,
    pub length: usize,
    pub dimension: usize,
    pub self_dual: bool,
    pub min_distance: usize,
    pub budget: u64,
}

/// Parses a polynomial in text form over `F_q`.
pub fn parse_poly(field: &Field, text: &str) -> Result<Poly> {
    Poly::parse(field, text)
}

pub const SURVEY_HEADER: [&str; 7] = ["p", "q", "ord_p_q", "ord_4p_q", "case", "oddly_good", "primitive"];

/// Survey rows as CSV with a header line.
pub fn survey_csv(rows: &[SurveyRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(SURVEY_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            r.ord_p_q.to_string(),
            r.ord_4p_q.to_string(),
            r.case.tag().to_string(),
            r.oddly_good.to_string(),
            r.primitive.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// A full survey table: run configuration as leading `#` lines, the rows, and
/// a trailing `#` summary line.
pub fn survey_table(survey: &Survey, config: &RunConfig) -> Result<String> {
    let params = serde_json::to_string(&config.parameters).map_err(|e| Error::Parse(e.to_string()))?;
    let s = &survey.summary;
    Ok(format!(
        "# schema_version={SCHEMA_VERSION} command={} seed={} workers={}\n# parameters={params}\n{}# summary rows={} primitive={} self_reciprocal={} primitive_fraction={:.6}\n",
        config.command,
        config.seed,
        config.workers,
        survey_csv(&survey.rows)?,
        s.rows,
        s.primitive_rows,
        s.self_reciprocal_rows,
        s.primitive_fraction,
    ))
}

/// Parses survey rows; `#` lines are skipped.
pub fn parse_survey_csv(text: &str) -> Result<Vec<SurveyRow>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let parse_err = |e: &dyn std::fmt::Display| Error::Parse(e.to_string());
    let header = r.headers().map_err(|e| parse_err(&e))?;
    if header.iter().ne(SURVEY_HEADER) {
        return Err(Error::Parse(format!("unexpected survey header {header:?}")));
    }
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| parse_err(&e))?;
            let num = |i: usize| rec[i].parse::<u64>().map_err(|e| parse_err(&e));
            let flag = |i: usize| rec[i].parse::<bool>().map_err(|e| parse_err(&e));
            Ok(SurveyRow {
                p: num(0)?,
                q: num(1)?,
                ord_p_q: num(2)?,
                ord_4p_q: num(3)?,
                case: rec[4].parse()?,
                oddly_good: flag(5)?,
                primitive: flag(6)?,
            })
        })
        .collect()
}

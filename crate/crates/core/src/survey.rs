//! Surveys over primes `p ≡ 3 (mod 4)`: orders of `q`, the classification
//! case, and how often `q` is a primitive root.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::classify::{arithmetic_class, FactorCase};
use crate::error::{invalid, Result};

pub const MAX_SURVEY_P: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub p: u64,
    pub q: u64,
    pub ord_p_q: u64,
    pub ord_4p_q: u64,
    pub case: FactorCase,
    pub oddly_good: bool,
    pub primitive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub q: u64,
    pub p_max: u64,
    pub rows: usize,
    pub primitive_rows: usize,
    pub self_reciprocal_rows: usize,
    pub primitive_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Survey {
    pub rows: Vec<SurveyRow>,
    pub summary: SurveySummary,
}

pub fn survey_row(p: u64, q: u64) -> Result<SurveyRow> {
    let class = arithmetic_class(p, q)?;
    let odd = arith::minus_one_exponent(q, 4 * p)?.is_some_and(|k| k % 2 == 1);
    Ok(SurveyRow {
        p,
        q,
        ord_p_q: class.ord_p_q,
        ord_4p_q: class.ord_4p_q,
        case: class.case,
        oddly_good: odd,
        primitive: class.checks.q_primitive_mod_p,
    })
}

/// One row per prime `p ≡ 3 (mod 4)`, `p ∤ q`, `p ≤ p_max`.
pub fn survey(q: u64, p_max: u64) -> Result<Survey> {
    match arith::prime_power(q) {
        Some((p0, _)) if p0 != 2 => {}
        _ => return invalid(format!("q = {q} must be an odd prime power")),
    }
    if p_max > MAX_SURVEY_P {
        return invalid(format!("p_max = {p_max} exceeds {MAX_SURVEY_P}"));
    }
    let rows = arith::primes_in(3, p_max)
        .filter(|&p| p % 4 == 3 && !q.is_multiple_of(p))
        .map(|p| survey_row(p, q))
        .collect::<Result<Vec<_>>>()?;
    let primitive_rows = rows.iter().filter(|r| r.primitive).count();
    let self_reciprocal_rows = rows.iter().filter(|r| r.case == FactorCase::SelfReciprocalPair).count();
    let summary = SurveySummary {
        q,
        p_max,
        rows: rows.len(),
        primitive_rows,
        self_reciprocal_rows,
        primitive_fraction: if rows.is_empty() { 0.0 } else { primitive_rows as f64 / rows.len() as f64 },
    };
    Ok(Survey { rows, summary })
}

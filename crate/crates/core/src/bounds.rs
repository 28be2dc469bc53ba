//! The `q`-ary entropy function, its inverse, and the distance thresholds for
//! self-dual double- and four-negacirculant families.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// `H_q(t) = t log_q(q-1) - t log_q t - (1-t) log_q(1-t)` on `[0, (q-1)/q]`.
pub fn entropy(q: u64, t: f64) -> Result<f64> {
    if q < 2 {
        return invalid(format!("alphabet size {q} must be at least 2"));
    }
    let top = (q - 1) as f64 / q as f64;
    if !(0.0..=top).contains(&t) {
        return invalid(format!("t = {t} outside [0, {top}]"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t == top {
        return Ok(1.0);
    }
    let ln_q = (q as f64).ln();
    let h = t * ((q - 1) as f64).ln() - t * t.ln() - (1.0 - t) * (1.0 - t).ln();
    Ok(h / ln_q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseEntropy {
    pub delta: f64,
    pub iterations: u32,
}

const MAX_BISECTIONS: u32 = 2000;

/// The `t ∈ [0, (q-1)/q]` with `|H_q(t) - y| ≤ tolerance`, by bisection.
pub fn inverse_entropy(q: u64, y: f64, tolerance: f64) -> Result<InverseEntropy> {
    if !(tolerance > 0.0) {
        return invalid(format!("tolerance {tolerance} must be positive"));
    }
    if !(0.0..=1.0).contains(&y) {
        return invalid(format!("y = {y} outside [0, 1]"));
    }
    let (mut lo, mut hi) = (0.0f64, (q - 1) as f64 / q as f64);
    for (t, iterations) in [(lo, 0), (hi, 0)] {
        if (entropy(q, t)? - y).abs() <= tolerance {
            return Ok(InverseEntropy { delta: t, iterations });
        }
    }
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let h = entropy(q, mid)?;
        if (h - y).abs() <= tolerance {
            return Ok(InverseEntropy { delta: mid, iterations });
        }
        if h < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    Err(crate::Error::Infeasible(format!(
        "bisection for H_{q}(t) = {y} did not reach tolerance {tolerance}"
    )))
}

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub q: u64,
    /// 2 for double-, 4 for four-negacirculant codes
    pub index: u32,
    /// `(numerator, denominator)` of the entropy target
    pub target: (u32, u32),
    pub delta0: f64,
    pub entropy_at_delta0: f64,
    pub tolerance: f64,
    pub iterations: u32,
    /// Both families are self-dual, hence of rate 1/2.
    pub rate: (u32, u32),
    /// `H_q^{-1}(1/2)`, the linear-code reference at rate 1/2.
    pub linear_vg_delta: f64,
}

impl BoundResult {
    pub fn target_value(&self) -> f64 {
        self.target.0 as f64 / self.target.1 as f64
    }
}

/// `δ0` with `H_q(δ0) = 1/8` (index 2) or `1/16` (index 4).
pub fn vg_threshold(q: u64, index: u32) -> Result<BoundResult> {
    vg_threshold_with_tolerance(q, index, DEFAULT_TOLERANCE)
}

pub fn vg_threshold_with_tolerance(q: u64, index: u32, tolerance: f64) -> Result<BoundResult> {
    let target = match index {
        2 => (1, 8),
        4 => (1, 16),
        other => return invalid(format!("index must be 2 or 4, got {other}")),
    };
    let inv = inverse_entropy(q, target.0 as f64 / target.1 as f64, tolerance)?;
    let linear = inverse_entropy(q, 0.5, tolerance)?;
    Ok(BoundResult {
        q,
        index,
        target,
        delta0: inv.delta,
        entropy_at_delta0: entropy(q, inv.delta)?,
        tolerance,
        iterations: inv.iterations,
        rate: (1, 2),
        linear_vg_delta: linear.delta,
    })
}

/// Exact sides of `q^2 (q^m + 1) Σ_{i ≤ d} C(n, i) (q-1)^i < q^{n/2}` for
/// `n = 2p`, `m = (n-2)/4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpurgationMargin {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    /// Largest `d` satisfying the inequality; `None` when even `d = 0` fails.
    pub d_n: Option<u64>,
    /// Left side at `d_n` (at `0` when there is no guarantee).
    #[serde(with = "crate::report::decimal")]
    pub lhs: BigUint,
    #[serde(with = "crate::report::decimal")]
    pub rhs: BigUint,
    /// Left side at `d_n + 1` (at `0` when there is no guarantee), the first failing value.
    #[serde(with = "crate::report::decimal::option")]
    pub lhs_next: Option<BigUint>,
}

/// Left side of the expurgation inequality for every `d` in `0..=n`.
pub fn expurgation_lhs(p: u64, q: u64) -> Vec<BigUint> {
    let n = 2 * p;
    let qb = BigUint::from(q);
    let prefix = &qb * &qb * (qb.pow(((p - 1) / 2) as u32) + 1u32);
    let mut binom = BigUint::one();
    let mut weight = BigUint::one();
    let mut sum = BigUint::from(0u32);
    let mut out = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        if i > 0 {
            binom = binom * (n - i + 1) / i;
            weight *= q - 1;
        }
        sum += &binom * &weight;
        out.push(&prefix * &sum);
    }
    out
}

pub fn expurgation_margin(p: u64, q: u64) -> Result<ExpurgationMargin> {
    if p < 3 || p.is_multiple_of(2) {
        return invalid(format!("p = {p} must be odd and at least 3"));
    }
    if q < 2 {
        return invalid(format!("q = {q} must be at least 2"));
    }
    let n = 2 * p;
    let rhs = BigUint::from(q).pow(p as u32);
    let lhs = expurgation_lhs(p, q);
    let passing = lhs.iter().take_while(|v| **v < rhs).count();
    Ok(match passing {
        0 => ExpurgationMargin { p, q, n, d_n: None, lhs: lhs[0].clone(), rhs, lhs_next: None },
        k => ExpurgationMargin {
            p,
            q,
            n,
            d_n: Some(k as u64 - 1),
            lhs: lhs[k - 1].clone(),
            rhs,
            lhs_next: lhs.get(k).cloned(),
        },
    })
}

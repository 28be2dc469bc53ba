//! Classification of `x^{2p} + 1` over `F_q` into `(x^2+1)·g1·g2`.
//!
//! When `q ≡ 3 (mod 4)`, `p ≡ 3 (mod 4)` and `ord_{4p}(q) = p - 1`, the
//! polynomial has exactly three irreducible factors. The two factors of
//! degree `p - 1` are both self-reciprocal when `ord_p(q) ≡ 2 (mod 4)`
//! (equivalently, `4p` is oddly-good for `(q, 1)`), and are each other's
//! reciprocal otherwise. [`classify`] derives the case arithmetically and
//! audits it against the actual factorization.

use serde::{Deserialize, Serialize};

use crate::arith::{self, GoodIntegerVerdict};
use crate::error::{invalid, Error, Result};
use crate::field::{field_of_order, Field};
use crate::poly::{factorize, FactorizationResult, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorCase {
    SelfReciprocalPair,
    ReciprocalPair,
    NotApplicable,
}

impl FactorCase {
    pub fn tag(self) -> &'static str {
        match self {
            FactorCase::SelfReciprocalPair => "SelfReciprocalPair",
            FactorCase::ReciprocalPair => "ReciprocalPair",
            FactorCase::NotApplicable => "NotApplicable",
        }
    }
}

impl std::fmt::Display for FactorCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for FactorCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SelfReciprocalPair" => Ok(FactorCase::SelfReciprocalPair),
            "ReciprocalPair" => Ok(FactorCase::ReciprocalPair),
            "NotApplicable" => Ok(FactorCase::NotApplicable),
            other => Err(Error::Parse(format!("unknown case {other:?}"))),
        }
    }
}

/// The individual hypotheses, kept separate so reports show which one failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremChecks {
    pub q_mod4_is3: bool,
    pub p_mod4_is3: bool,
    pub coprime: bool,
    pub ord_4p_eq_p_minus_1: bool,
    pub ord_p_mod4_is2: bool,
    pub q_primitive_mod_p: bool,
}

impl TheoremChecks {
    /// Hypotheses under which `x^{2p} + 1` has exactly three irreducible factors.
    pub fn three_factor_hypotheses(&self) -> bool {
        self.q_mod4_is3 && self.p_mod4_is3 && self.coprime && self.ord_4p_eq_p_minus_1
    }
}

/// Arithmetic side of the classification: no polynomials involved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithmeticClass {
    pub ord_p_q: u64,
    pub ord_4p_q: u64,
    pub checks: TheoremChecks,
    pub case: FactorCase,
}

fn validate(p: u64, q: u64) -> Result<(u64, u32)> {
    if p < 3 || !arith::is_prime(p) {
        return invalid(format!("p = {p} must be an odd prime"));
    }
    let Some((p0, e)) = arith::prime_power(q) else {
        return invalid(format!("q = {q} must be a prime power"));
    };
    if p0 == 2 {
        return invalid(format!("q = {q} must be odd"));
    }
    if arith::gcd(p, q) != 1 {
        return invalid(format!("gcd(p, q) = gcd({p}, {q}) != 1"));
    }
    Ok((p0, e))
}

/// Orders, hypothesis checks and the predicted case for `(p, q)`.
pub fn arithmetic_class(p: u64, q: u64) -> Result<ArithmeticClass> {
    validate(p, q)?;
    let ord_p_q = arith::mult_order(q, p)?;
    let ord_4p_q = arith::mult_order(q, 4 * p)?;
    let checks = TheoremChecks {
        q_mod4_is3: q % 4 == 3,
        p_mod4_is3: p % 4 == 3,
        coprime: true,
        ord_4p_eq_p_minus_1: ord_4p_q == p - 1,
        ord_p_mod4_is2: ord_p_q % 4 == 2,
        q_primitive_mod_p: ord_p_q == p - 1,
    };
    let case = if !checks.three_factor_hypotheses() {
        FactorCase::NotApplicable
    } else if checks.ord_p_mod4_is2 {
        FactorCase::SelfReciprocalPair
    } else {
        FactorCase::ReciprocalPair
    };
    Ok(ArithmeticClass { ord_p_q, ord_4p_q, checks, case })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub p: u64,
    pub q: u64,
    pub n: usize,
    pub ord_p_q: u64,
    pub ord_4p_q: u64,
    pub checks: TheoremChecks,
    /// Factorization of `x^n + 1`, reported even when the hypotheses fail.
    pub factors: FactorizationResult,
    pub case: FactorCase,
    pub oddly_good: GoodIntegerVerdict,
}

impl ClassificationReport {
    pub fn field(&self) -> &Field {
        self.factors.leading.field()
    }

    /// `x^2 + 1`, when it is one of the factors.
    pub fn quadratic(&self) -> Option<&Poly> {
        self.factors
            .factors
            .iter()
            .map(|(g, _)| g)
            .find(|g| g.raw() == [1, 0, 1])
    }

    fn big_factors(&self) -> Vec<&Poly> {
        self.factors
            .factors
            .iter()
            .map(|(g, _)| g)
            .filter(|g| g.raw() != [1, 0, 1])
            .collect()
    }

    /// The canonically smaller factor of degree `p - 1` (three-factor cases only).
    pub fn g1(&self) -> Option<&Poly> {
        match self.case {
            FactorCase::NotApplicable => None,
            _ => self.big_factors().first().copied(),
        }
    }

    pub fn g2(&self) -> Option<&Poly> {
        match self.case {
            FactorCase::NotApplicable => None,
            _ => self.big_factors().get(1).copied(),
        }
    }
}

/// Checks the hypotheses on `(p, q)`, factorizes `x^{2p} + 1` and classifies it.
///
/// The arithmetic prediction, the shape of the factorization, the
/// self-reciprocity of `g1, g2` and the oddly-good verdict for `4p` must all
/// agree; any disagreement is an [`Error::Audit`].
pub fn classify(p: u64, q: u64) -> Result<ClassificationReport> {
    let class = arithmetic_class(p, q)?;
    let field = field_of_order(q)?;
    let n = (2 * p) as usize;
    let factors = factorize(&Poly::xn_plus_one(&field, n))?;
    let oddly_good = arith::good_integer_verdict(4 * p, q, 1, None)?;

    let report = ClassificationReport {
        p,
        q,
        n,
        ord_p_q: class.ord_p_q,
        ord_4p_q: class.ord_4p_q,
        checks: class.checks,
        factors,
        case: class.case,
        oddly_good,
    };
    if report.case != FactorCase::NotApplicable {
        audit(&report)?;
    }
    Ok(report)
}

fn audit(r: &ClassificationReport) -> Result<()> {
    let fail = |msg: String| Err(Error::Audit(format!("classify(p={}, q={}): {msg}", r.p, r.q)));
    let degrees = r.factors.degrees();
    let p = r.p as usize;
    let mut expected = vec![2, p - 1, p - 1];
    expected.sort_unstable();
    let mut got = degrees.clone();
    got.sort_unstable();
    if got != expected || r.quadratic().is_none() {
        return fail(format!("expected factors of degrees {{2, {}, {}}} including x^2+1, got {degrees:?}", p - 1, p - 1));
    }
    let (g1, g2) = (r.g1().expect("three factors"), r.g2().expect("three factors"));
    let both_self = g1.is_self_reciprocal()? && g2.is_self_reciprocal()?;
    let swapped = g1.reciprocal()? == *g2;
    match r.case {
        FactorCase::SelfReciprocalPair if !both_self => {
            return fail(format!("ord_p(q) ≡ 2 mod 4 but {g1} / {g2} are not self-reciprocal"))
        }
        FactorCase::ReciprocalPair if both_self || !swapped => {
            return fail(format!("expected {g1} and {g2} to be reciprocal of each other"))
        }
        _ => {}
    }
    let self_pair = r.case == FactorCase::SelfReciprocalPair;
    if self_pair != r.oddly_good.is_oddly_good {
        return fail(format!(
            "case {} but 4p oddly-good = {}",
            r.case, r.oddly_good.is_oddly_good
        ));
    }
    if r.checks.q_primitive_mod_p && !self_pair {
        return fail("q is primitive mod p but the factors are not self-reciprocal".into());
    }
    Ok(())
}

/// Outcome of [`verify_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportVerification {
    pub ok: bool,
    pub discrepancies: Vec<String>,
}

/// Re-derives every claim of a report from scratch.
pub fn verify_report(r: &ClassificationReport) -> ReportVerification {
    let mut bad = Vec::new();
    let mut note = |ok: bool, msg: String| {
        if !ok {
            bad.push(msg);
        }
    };

    let class = match arithmetic_class(r.p, r.q) {
        Ok(c) => c,
        Err(e) => {
            return ReportVerification { ok: false, discrepancies: vec![format!("invalid parameters: {e}")] }
        }
    };
    let field = r.field().clone();
    note(field.order() as u64 == r.q, format!("factor field F_{} is not F_{}", field.order(), r.q));
    note(r.n == 2 * r.p as usize, format!("n = {} is not 2p", r.n));
    note(r.ord_p_q == class.ord_p_q, format!("ord_p(q) = {} reported, {} recomputed", r.ord_p_q, class.ord_p_q));
    note(r.ord_4p_q == class.ord_4p_q, format!("ord_4p(q) = {} reported, {} recomputed", r.ord_4p_q, class.ord_4p_q));
    note(r.checks == class.checks, format!("checks {:?} reported, {:?} recomputed", r.checks, class.checks));

    let target = Poly::xn_plus_one(&field, 2 * r.p as usize);
    note(r.factors.product() == target, "factor product differs from x^n + 1".into());
    note(r.factors.is_sorted(), "factors are not in canonical order".into());
    for (g, _) in &r.factors.factors {
        note(g.is_monic(), format!("factor {g} is not monic"));
        note(g.is_irreducible().unwrap_or(false), format!("factor {g} is not irreducible"));
    }

    match arith::good_integer_verdict(4 * r.p, r.q, 1, None) {
        Ok(v) => note(v == r.oddly_good, "oddly-good verdict differs".into()),
        Err(e) => note(false, format!("oddly-good verdict failed: {e}")),
    }

    // The case is re-derived from the polynomials themselves.
    let big: Vec<&Poly> = r
        .factors
        .factors
        .iter()
        .map(|(g, _)| g)
        .filter(|g| g.raw() != [1, 0, 1])
        .collect();
    let observed = if !class.checks.three_factor_hypotheses() {
        FactorCase::NotApplicable
    } else if big.len() == 2 && big.iter().all(|g| g.is_self_reciprocal().unwrap_or(false)) {
        FactorCase::SelfReciprocalPair
    } else if big.len() == 2 && big[0].reciprocal().ok().as_ref() == Some(big[1]) {
        FactorCase::ReciprocalPair
    } else {
        note(false, "three-factor hypotheses hold but the factorization does not match".into());
        FactorCase::NotApplicable
    };
    note(observed == r.case, format!("case {} reported, {} observed", r.case, observed));
    note(class.case == r.case, format!("case {} reported, {} predicted", r.case, class.case));

    ReportVerification { ok: bad.is_empty(), discrepancies: bad }
}

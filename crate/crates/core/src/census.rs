//! Census of self-dual double- and four-negacirculant codes through the CRT.
//!
//! When `x^{2p} + 1 = (x^2+1)·g1·g2` with `g1, g2` self-reciprocal,
//! `F_q[x]/(x^n + 1)` splits into three fields and `a ↦ a'` acts on each as
//! the involutive Frobenius `z ↦ z^σ` (`σ = q` on `F_q[x]/(x^2+1)`,
//! `σ = q^{(p-1)/2}` on the other two). Self-duality of `C_h` becomes
//! `1 + h·h^σ = 0` componentwise, and that of `C_{a,b}` becomes
//! `a^{1+σ} + b^{1+σ} = -1`.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classify::{ClassificationReport, FactorCase};
use crate::error::{invalid, Error, Result};
use crate::field::Field;
use crate::nega::{self, LinearCode};
use crate::poly::Poly;

/// Largest component field or candidate space that is scanned element by element.
pub const SCAN_LIMIT: u64 = 10_000_000;
/// Largest `Q^2` for which diagonal counts use a direct pair scan.
pub const PAIR_SCAN_LIMIT: u64 = 100_000_000;
/// Seed of the random polynomials used to self-check every CRT context.
pub const CRT_CHECK_SEED: u64 = 0x6372_745f_6368_6b21;
pub const DEFAULT_SAMPLE_SIZE: usize = 1000;

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

/// `F_q[x]/(g)` for a monic irreducible `g`, with the conjugation `z ↦ z^σ`.
///
/// Elements are coefficient vectors of length `deg g`; they are indexed by
/// reading the raw coefficients as base-`q` digits, ascending.
#[derive(Debug, Clone)]
pub struct ComponentField {
    modulus: Poly,
    degree: usize,
    order: u64,
    conj_base: u128,
    /// `conj_cols[j] = (x^j)^σ mod g`
    conj_cols: Vec<Vec<u32>>,
}

impl ComponentField {
    pub fn new(modulus: &Poly, conj_base: u128) -> Result<Self> {
        let degree = match modulus.degree() {
            Some(d) if d >= 1 && modulus.is_monic() => d,
            _ => return invalid(format!("component modulus {modulus} must be monic of degree >= 1")),
        };
        if !modulus.is_irreducible()? {
            return invalid(format!("component modulus {modulus} is reducible"));
        }
        let q = modulus.field().order() as u64;
        let order = checked_pow(q, degree)
            .ok_or_else(|| Error::Infeasible(format!("component field of order {q}^{degree}")))?;
        let f = modulus.field();
        let xs = Poly::x(f).modexp(conj_base, modulus)?;
        let mut conj_cols = Vec::with_capacity(degree);
        let mut power = Poly::one(f);
        for _ in 0..degree {
            conj_cols.push(power.raw_padded(degree));
            power = (&power * &xs).rem(modulus)?;
        }
        Ok(ComponentField { modulus: modulus.clone(), degree, order, conj_base, conj_cols })
    }

    pub fn field(&self) -> &Field {
        self.modulus.field()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conj_base(&self) -> u128 {
        self.conj_base
    }

    pub fn digits(&self, index: u64) -> Vec<u32> {
        let q = self.field().order() as u64;
        let mut t = index;
        (0..self.degree)
            .map(|_| {
                let d = (t % q) as u32;
                t /= q;
                d
            })
            .collect()
    }

    pub fn index(&self, v: &[u32]) -> u64 {
        let q = self.field().order() as u64;
        v.iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    pub fn to_poly(&self, v: &[u32]) -> Poly {
        Poly::from_raw(self.field(), v.to_vec())
    }

    pub fn from_poly(&self, a: &Poly) -> Result<Vec<u32>> {
        Ok(a.rem(&self.modulus)?.raw_padded(self.degree))
    }

    /// Product of two coefficient vectors, reduced mod `g`.
    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field();
        let d = self.degree;
        let mut prod = vec![0u32; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add_raw(prod[i + j], f.mul_raw(x, y));
            }
        }
        let g = self.modulus.raw();
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] = f.sub_raw(prod[k - d + i], f.mul_raw(c, g[i]));
            }
        }
        prod.truncate(d);
        prod
    }

    /// `a^σ`, applied as a linear map over `F_q`.
    pub fn conj(&self, a: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out = vec![0u32; self.degree];
        for (j, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(&self.conj_cols[j]) {
                *o = f.add_raw(*o, f.mul_raw(c, v));
            }
        }
        out
    }

    /// `a^{1+σ}`.
    pub fn norm(&self, a: &[u32]) -> Vec<u32> {
        self.mul(a, &self.conj(a))
    }

    /// `-1 - v`.
    fn minus_one_minus(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out: Vec<u32> = v.iter().map(|&c| f.neg_raw(c)).collect();
        out[0] = f.sub_raw(out[0], 1);
        out
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.order > SCAN_LIMIT {
            return Err(Error::Infeasible(format!(
                "component field of order {} exceeds the scan limit {SCAN_LIMIT}",
                self.order
            )));
        }
        Ok(())
    }

    /// Norms of every element, by index.
    fn norm_table(&self) -> Result<Vec<u64>> {
        self.check_enumerable()?;
        Ok((0..self.order)
            .into_par_iter()
            .map(|i| self.index(&self.norm(&self.digits(i))))
            .collect())
    }
}

/// `u · v^σ mod g`.
pub fn hermitian_pairing(u: &Poly, v: &Poly, g: &Poly, conj_base: u128) -> Result<Poly> {
    (u * &v.modexp(conj_base, g)?).rem(g)
}

/// All `h` in `F_q[x]/(g)` with `1 + h·h^σ = 0`, by exhaustive scan.
pub fn unary_hermitian_solutions(g: &Poly, conj_base: u128) -> Result<Vec<Poly>> {
    let comp = ComponentField::new(g, conj_base)?;
    Ok(unary_solutions(&comp)?.iter().map(|v| comp.to_poly(v)).collect())
}

fn unary_solutions(comp: &ComponentField) -> Result<Vec<Vec<u32>>> {
    comp.check_enumerable()?;
    let target = comp.minus_one_minus(&vec![0; comp.degree]);
    Ok((0..comp.order)
        .into_par_iter()
        .map(|i| comp.digits(i))
        .filter(|h| comp.norm(h) == target)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalMethod {
    PairScan,
    NormHistogram,
}

/// Number of pairs `(a, b)` in `F_q[x]/(g)` with `a^{1+σ} + b^{1+σ} = -1`.
pub fn diagonal_solutions(g: &Poly, conj_base: u128) -> Result<(u64, DiagonalMethod)> {
    let comp = ComponentField::new(g, conj_base)?;
    diagonal_count(&comp)
}

fn diagonal_count(comp: &ComponentField) -> Result<(u64, DiagonalMethod)> {
    let norms = comp.norm_table()?;
    let targets: Vec<u64> = norms
        .par_iter()
        .map(|&n| comp.index(&comp.minus_one_minus(&comp.digits(n))))
        .collect();
    let q2 = comp.order.checked_mul(comp.order);
    if q2.is_some_and(|v| v <= PAIR_SCAN_LIMIT) {
        let count = targets
            .par_iter()
            .map(|&t| norms.iter().filter(|&&n| n == t).count() as u64)
            .sum();
        Ok((count, DiagonalMethod::PairScan))
    } else {
        let mut hist: HashMap<u64, u64> = HashMap::new();
        for &n in &norms {
            *hist.entry(n).or_default() += 1;
        }
        let count = targets.iter().map(|t| hist.get(t).copied().unwrap_or(0)).sum();
        Ok((count, DiagonalMethod::NormHistogram))
    }
}

/// Uniform sampler over the solutions of `a^{1+σ} + b^{1+σ} = -1`.
struct DiagonalSampler {
    /// elements grouped by norm
    fibers: HashMap<u64, Vec<u64>>,
    targets: Vec<u64>,
    /// cumulative solution counts over `a`
    prefix: Vec<u64>,
}

impl DiagonalSampler {
    fn new(comp: &ComponentField) -> Result<Self> {
        let norms = comp.norm_table()?;
        let mut fibers: HashMap<u64, Vec<u64>> = HashMap::new();
        for (i, &n) in norms.iter().enumerate() {
            fibers.entry(n).or_default().push(i as u64);
        }
        let targets: Vec<u64> = norms
            .iter()
            .map(|&n| comp.index(&comp.minus_one_minus(&comp.digits(n))))
            .collect();
        let mut prefix = Vec::with_capacity(targets.len());
        let mut acc = 0u64;
        for t in &targets {
            acc += fibers.get(t).map_or(0, |v| v.len() as u64);
            prefix.push(acc);
        }
        Ok(DiagonalSampler { fibers, targets, prefix })
    }

    fn total(&self) -> u64 {
        self.prefix.last().copied().unwrap_or(0)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> (u64, u64) {
        let r = rng.gen_range(0..self.total());
        let a = self.prefix.partition_point(|&c| c <= r);
        let before = if a == 0 { 0 } else { self.prefix[a - 1] };
        let fiber = &self.fibers[&self.targets[a]];
        (a as u64, fiber[(r - before) as usize])
    }
}

/// The CRT isomorphism `F_q[x]/(x^n+1) ≅ F_q[x]/(x^2+1) × F_q[x]/(g1) × F_q[x]/(g2)`.
#[derive(Debug, Clone)]
pub struct CrtContext {
    pub p: u64,
    pub q: u64,
    pub n: usize,
    components: [ComponentField; 3],
    idempotents: [Poly; 3],
}

impl CrtContext {
    pub fn field(&self) -> &Field {
        self.components[0].field()
    }

    pub fn components(&self) -> &[ComponentField; 3] {
        &self.components
    }

    pub fn component_moduli(&self) -> [&Poly; 3] {
        self.components.each_ref().map(|c| c.modulus())
    }

    pub fn conj_exponents(&self) -> [u128; 3] {
        self.components.each_ref().map(|c| c.conj_base())
    }

    pub fn component_sizes(&self) -> [u64; 3] {
        self.components.each_ref().map(|c| c.order())
    }

    /// Reductions of `f` modulo each component modulus.
    pub fn project(&self, f: &Poly) -> Result<[Poly; 3]> {
        let [a, b, c] = self.component_moduli();
        Ok([f.rem(a)?, f.rem(b)?, f.rem(c)?])
    }

    /// The unique `f` of degree `< n` with the given residues.
    pub fn lift(&self, parts: &[Poly; 3]) -> Result<Poly> {
        let mut acc = Poly::zero(self.field());
        for (c, e) in parts.iter().zip(&self.idempotents) {
            acc = &acc + &c.try_mul(e)?;
        }
        Ok(nega::reduce_negacyclic(&acc, self.n))
    }

    fn lift_vectors(&self, parts: [&[u32]; 3]) -> Result<Poly> {
        let polys = [0, 1, 2].map(|i| self.components[i].to_poly(parts[i]));
        self.lift(&polys)
    }
}

/// Builds the CRT context for a self-reciprocal-pair classification.
pub fn make_crt_context(report: &ClassificationReport) -> Result<CrtContext> {
    if report.case != FactorCase::SelfReciprocalPair {
        return Err(Error::Hypothesis(format!(
            "CRT census needs a self-reciprocal factor pair; (p, q) = ({}, {}) is {}",
            report.p, report.q, report.case
        )));
    }
    let (p, q, n) = (report.p, report.q, report.n);
    let field = report.field();
    let quad = report.quadratic().expect("three factors");
    let (g1, g2) = (report.g1().expect("three factors"), report.g2().expect("three factors"));
    let half = (p - 1) / 2;
    let sigma = (q as u128).pow(half as u32);
    let components = [
        ComponentField::new(quad, q as u128)?,
        ComponentField::new(g1, sigma)?,
        ComponentField::new(g2, sigma)?,
    ];
    let modulus = Poly::xn_plus_one(field, n);
    let mut idempotents = Vec::with_capacity(3);
    for comp in &components {
        let g = comp.modulus();
        let cofactor = modulus.exact_div(g)?;
        let inv = cofactor
            .inv_mod(g)?
            .ok_or_else(|| Error::Audit(format!("{g} is not coprime to its cofactor")))?;
        idempotents.push((&cofactor * &inv).rem(&modulus)?);
    }
    let ctx = CrtContext {
        p,
        q,
        n,
        components,
        idempotents: idempotents.try_into().expect("three idempotents"),
    };
    check_round_trips(&ctx, 100, CRT_CHECK_SEED)?;
    Ok(ctx)
}

/// Asserts `lift ∘ project = id` and `project ∘ lift = id` on random inputs.
pub fn check_round_trips(ctx: &CrtContext, count: usize, seed: u64) -> Result<()> {
    let f = ctx.field();
    let q = f.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let poly = Poly::from_raw(f, (0..ctx.n).map(|_| rng.gen_range(0..q)).collect());
        if ctx.lift(&ctx.project(&poly)?)? != poly {
            return Err(Error::Audit(format!("lift(project({poly})) differs")));
        }
        let parts: [Poly; 3] = ctx.components.each_ref().map(|c| {
            Poly::from_raw(f, (0..c.degree()).map(|_| rng.gen_range(0..q)).collect())
        });
        if ctx.project(&ctx.lift(&parts)?)? != parts {
            return Err(Error::Audit("project(lift(parts)) differs".into()));
        }
    }
    Ok(())
}

/// Evaluates the formula/constructive/exhaustive censuses up to the chosen mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DoubleMode {
    Formula,
    Constructive,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FourMode {
    Formula,
    ConstructiveComponents,
    SampleLift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusKind {
    Double,
    Four,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub size: usize,
    pub seed: u64,
    pub self_dual: usize,
    pub prop21: usize,
    pub conjugation_consistent: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub p: u64,
    pub q: u64,
    pub kind: CensusKind,
    pub mode: String,
    #[serde(with = "crate::report::decimal")]
    pub formula_count: BigUint,
    #[serde(with = "crate::report::decimal::option")]
    pub constructive_count: Option<BigUint>,
    #[serde(with = "crate::report::decimal::option")]
    pub exhaustive_count: Option<BigUint>,
    /// Per-component counts (unary solutions or diagonal pairs).
    pub component_counts: Vec<u64>,
    /// Constructive and exhaustive `h`-sets coincide.
    pub sets_match: Option<bool>,
    /// `h ↦ C_h` is injective on the exhaustive set.
    pub injective: Option<bool>,
    pub samples: Option<SampleSummary>,
    pub notes: Vec<String>,
    pub agree: bool,
}

impl CensusReport {
    fn finish(mut self) -> Self {
        let counts = [&self.constructive_count, &self.exhaustive_count];
        self.agree = counts.iter().all(|c| c.as_ref().is_none_or(|c| *c == self.formula_count))
            && self.sets_match != Some(false)
            && self.injective != Some(false)
            && self.samples.as_ref().is_none_or(|s| {
                s.self_dual == s.size && s.prop21 == s.size && s.conjugation_consistent == s.size
            });
        self
    }
}

/// `(q+1)(q^m+1)^2` with `m = (p-1)/2`.
pub fn double_formula(p: u64, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let qm = q.pow(((p - 1) / 2) as u32);
    (&q + 1u32) * (&qm + 1u32) * (&qm + 1u32)
}

/// `(q+1)(q^2-q)(q^m+1)^2(q^{2m}-q^m)^2` with `m = (p-1)/2`.
pub fn four_formula(p: u64, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let qm = q.pow(((p - 1) / 2) as u32);
    let inner = (&qm + 1u32) * (&qm * &qm - &qm);
    (&q + 1u32) * (&q * &q - &q) * &inner * &inner
}

/// Index of `h` when its coefficients are read as base-`q` digits, ascending.
pub fn h_index(h: &Poly, n: usize) -> u64 {
    let q = h.field().order() as u64;
    h.raw_padded(n).iter().rev().fold(0, |acc, &c| acc * q + c as u64)
}

pub fn h_from_index(field: &Field, n: usize, index: u64) -> Poly {
    let q = field.order() as u64;
    let mut t = index;
    let coeffs = (0..n)
        .map(|_| {
            let d = (t % q) as u32;
            t /= q;
            d
        })
        .collect();
    Poly::from_raw(field, coeffs)
}

pub fn census_double(ctx: &CrtContext, mode: DoubleMode) -> Result<CensusReport> {
    let f = ctx.field().clone();
    let n = ctx.n;
    let mut report = CensusReport {
        p: ctx.p,
        q: ctx.q,
        kind: CensusKind::Double,
        mode: format!("{mode:?}").to_lowercase(),
        formula_count: double_formula(ctx.p, ctx.q),
        constructive_count: None,
        exhaustive_count: None,
        component_counts: Vec::new(),
        sets_match: None,
        injective: None,
        samples: None,
        notes: Vec::new(),
        agree: false,
    };
    if mode == DoubleMode::Formula {
        return Ok(report.finish());
    }

    let solutions = ctx
        .components
        .iter()
        .map(unary_solutions)
        .collect::<Result<Vec<_>>>()?;
    report.component_counts = solutions.iter().map(|s| s.len() as u64).collect();
    let (n0, n1, n2) = (solutions[0].len(), solutions[1].len(), solutions[2].len());
    let triples: Vec<(usize, usize, usize)> = (0..n0)
        .flat_map(|i| (0..n1).flat_map(move |j| (0..n2).map(move |k| (i, j, k))))
        .collect();
    log::info!("constructive census: lifting {} component triples", triples.len());
    let mut constructive = triples
        .par_iter()
        .map(|&(i, j, k)| -> Result<u64> {
            let h = ctx.lift_vectors([&solutions[0][i], &solutions[1][j], &solutions[2][k]])?;
            let code = nega::build_double(&h, n)?;
            if !code.is_self_dual() || !nega::double_criterion(&h, n)? {
                return Err(Error::Audit(format!("lifted h = {h} is not self-dual")));
            }
            Ok(h_index(&h, n))
        })
        .collect::<Result<Vec<_>>>()?;
    constructive.sort_unstable();
    report.constructive_count = Some(BigUint::from(constructive.len()));

    if mode == DoubleMode::Exhaustive {
        let exhaustive = exhaustive_double(&f, n)?;
        report.exhaustive_count = Some(BigUint::from(exhaustive.len()));
        report.sets_match = Some(exhaustive == constructive);
        report.injective = Some(codes_injective(&f, n, &exhaustive)?);
    }
    Ok(report.finish())
}

/// Sorted indices of every `h` with `1 + h·h' ≡ 0 mod x^n + 1`.
pub fn exhaustive_double(field: &Field, n: usize) -> Result<Vec<u64>> {
    let q = field.order();
    let space = checked_pow(q as u64, n).filter(|&s| s <= SCAN_LIMIT).ok_or_else(|| {
        Error::Infeasible(format!("exhaustive census over {q}^{n} candidates exceeds {SCAN_LIMIT}"))
    })?;
    log::info!("exhaustive census: scanning {space} candidates");
    let minus_one = field.minus_one_raw();
    if field.is_prime_field() {
        let p = q as u64;
        Ok(par_scan(q, n, |h| {
            let c0 = h.iter().map(|&v| v as u64 * v as u64).sum::<u64>() % p;
            if c0 != minus_one as u64 {
                return false;
            }
            (1..=n / 2).all(|k| {
                let pos: u64 = (0..n - k).map(|j| h[j + k] as u64 * h[j] as u64).sum();
                let neg: u64 = (0..k).map(|j| h[j] as u64 * h[j + n - k] as u64).sum();
                (pos + p * p * n as u64 - neg).is_multiple_of(p)
            })
        }))
    } else {
        Ok(par_scan(q, n, |h| {
            let sq = h.iter().fold(0, |acc, &v| field.add_raw(acc, field.mul_raw(v, v)));
            if sq != minus_one {
                return false;
            }
            (1..=n / 2).all(|k| {
                let mut c = 0;
                for j in 0..n - k {
                    c = field.add_raw(c, field.mul_raw(h[j + k], h[j]));
                }
                for j in 0..k {
                    c = field.sub_raw(c, field.mul_raw(h[j], h[j + n - k]));
                }
                c == 0
            })
        }))
    }
}

/// Distinct `h` give distinct codes: the reduced echelon forms of the
/// generators are pairwise different and each recovers its `h`.
fn codes_injective(field: &Field, n: usize, hs: &[u64]) -> Result<bool> {
    let keys = hs
        .par_iter()
        .map(|&idx| -> Result<Option<Vec<Vec<u32>>>> {
            let h = h_from_index(field, n, idx);
            let (rref, _) = nega::build_double(&h, n)?.generator().rref();
            let recovered = Poly::from_raw(field, rref.row(0)[n..].to_vec());
            Ok((recovered == h).then(|| rref.to_rows()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::with_capacity(keys.len());
    for key in keys {
        match key {
            Some(k) if !seen.contains(&k) => {
                seen.insert(k);
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Calls `pred` on every vector of `F_q^n` (raw digits, index order) and
/// returns the sorted indices where it holds. Work is split by the high
/// digits, so the output does not depend on the thread pool.
pub(crate) fn par_scan<F>(q: u32, n: usize, pred: F) -> Vec<u64>
where
    F: Fn(&[u32]) -> bool + Sync,
{
    let q64 = q as u64;
    let mut high = 0;
    while high < n && q64.pow(high as u32) < 256 {
        high += 1;
    }
    let low = n - high;
    let inner = q64.pow(low as u32);
    let tasks = q64.pow(high as u32);
    let done = AtomicU64::new(0);
    (0..tasks)
        .into_par_iter()
        .map(|prefix| {
            let mut digits = vec![0u32; n];
            let mut t = prefix;
            for d in digits[low..].iter_mut() {
                *d = (t % q64) as u32;
                t /= q64;
            }
            let base = prefix * inner;
            let mut hits = Vec::new();
            for offset in 0..inner {
                if pred(&digits) {
                    hits.push(base + offset);
                }
                for d in digits[..low].iter_mut() {
                    *d += 1;
                    if *d < q {
                        break;
                    }
                    *d = 0;
                }
            }
            let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
            if finished * 10 / tasks != (finished - 1) * 10 / tasks {
                log::info!("scan {}% ({finished}/{tasks} ranges)", finished * 100 / tasks);
            }
            hits
        })
        .collect::<Vec<_>>()
        .concat()
}

pub fn census_four(ctx: &CrtContext, mode: FourMode, sample_size: usize, seed: u64) -> Result<CensusReport> {
    let n = ctx.n;
    let mut report = CensusReport {
        p: ctx.p,
        q: ctx.q,
        kind: CensusKind::Four,
        mode: match mode {
            FourMode::Formula => "formula",
            FourMode::ConstructiveComponents => "constructive-components",
            FourMode::SampleLift => "sample-lift",
        }
        .to_string(),
        formula_count: four_formula(ctx.p, ctx.q),
        constructive_count: None,
        exhaustive_count: None,
        component_counts: Vec::new(),
        sets_match: None,
        injective: None,
        samples: None,
        notes: vec![format!(
            "exhaustive four-negacirculant census over q^(2n) = {}^{} pairs is not attempted",
            ctx.q,
            2 * n
        )],
        agree: false,
    };
    if mode == FourMode::Formula {
        return Ok(report.finish());
    }

    let mut product = BigUint::from(1u32);
    for comp in &ctx.components {
        let (count, method) = diagonal_count(comp)?;
        log::info!("component F_{}: {count} diagonal pairs ({method:?})", comp.order());
        report.component_counts.push(count);
        product *= count;
    }
    report.constructive_count = Some(product);

    if mode == FourMode::SampleLift {
        report.samples = Some(sample_lifts(ctx, sample_size, seed)?);
    }
    Ok(report.finish())
}

/// Draws random component solutions, lifts them to `(a, b)` and checks
/// self-duality, the matrix identity and `a' ↦ a^σ` componentwise.
pub fn sample_lifts(ctx: &CrtContext, size: usize, seed: u64) -> Result<SampleSummary> {
    let n = ctx.n;
    let samplers = ctx
        .components
        .iter()
        .map(DiagonalSampler::new)
        .collect::<Result<Vec<_>>>()?;
    if samplers.iter().any(|s| s.total() == 0) {
        return Err(Error::Audit("a component has no diagonal solutions".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<[(u64, u64); 3]> = (0..size)
        .map(|_| [0, 1, 2].map(|i| samplers[i].sample(&mut rng)))
        .collect();
    let mut summary = SampleSummary { size, seed, self_dual: 0, prop21: 0, conjugation_consistent: 0 };
    let results = draws
        .par_iter()
        .map(|draw| -> Result<(bool, bool, bool)> {
            let comps = &ctx.components;
            let av: Vec<Vec<u32>> = (0..3).map(|i| comps[i].digits(draw[i].0)).collect();
            let bv: Vec<Vec<u32>> = (0..3).map(|i| comps[i].digits(draw[i].1)).collect();
            let a = ctx.lift_vectors([&av[0], &av[1], &av[2]])?;
            let b = ctx.lift_vectors([&bv[0], &bv[1], &bv[2]])?;
            let code = nega::build_four(&a, &b, n)?;
            let sd = code.is_self_dual();
            let p21 = nega::prop21_check(&nega::nega_matrix(&a, n)?, &nega::nega_matrix(&b, n)?)?;
            let mut conj_ok = true;
            for (x, xv) in [(&a, &av), (&b, &bv)] {
                let xp = ctx.project(&nega::prime_map(x, n)?)?;
                for i in 0..3 {
                    conj_ok &= comps[i].from_poly(&xp[i])? == comps[i].conj(&xv[i]);
                }
            }
            Ok((sd, p21, conj_ok))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, (sd, p21, conj_ok)) in results.into_iter().enumerate() {
        summary.self_dual += sd as usize;
        summary.prop21 += p21 as usize;
        summary.conjugation_consistent += conj_ok as usize;
        if !(sd && p21 && conj_ok) {
            return Err(Error::Audit(format!(
                "lifted sample {i} (seed {seed}) failed: self-dual {sd}, matrix identity {p21}, conjugation {conj_ok}"
            )));
        }
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Containment {
    pub count: u64,
    #[serde(with = "crate::report::decimal")]
    pub bound: BigUint,
}

/// `q^2 (q^m + 1)` with `m = (p-1)/2`.
pub fn containment_bound(p: u64, q: u64) -> BigUint {
    let q = BigUint::from(q);
    &q * &q * (q.pow(((p - 1) / 2) as u32) + 1u32)
}

/// Counts the `h` with `u ∈ C_h` and `C_h` self-dual, scanning every `h`.
pub fn containment_count(ctx: &CrtContext, u: &[u32]) -> Result<Containment> {
    let f = ctx.field().clone();
    let n = ctx.n;
    if u.len() != 2 * n {
        return invalid(format!("u has length {}, expected {}", u.len(), 2 * n));
    }
    if u.iter().any(|&c| c >= f.order()) {
        return invalid("u has entries outside the field");
    }
    let weight = u.iter().filter(|&&c| c != 0).count();
    if weight == 0 || weight as u64 >= 2 * ctx.p {
        return invalid(format!("u must be nonzero of weight < {}, got {weight}", 2 * ctx.p));
    }
    let q = f.order();
    checked_pow(q as u64, n).filter(|&s| s <= SCAN_LIMIT).ok_or_else(|| {
        Error::Infeasible(format!("containment scan over {q}^{n} candidates exceeds {SCAN_LIMIT}"))
    })?;
    let (v, w) = u.split_at(n);
    let support: Vec<(usize, u32)> = v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
    // coefficient k of v·h mod x^n+1 = Σ_i v_i h_{k-i}, negated when k - i wraps
    let coeff = |h: &[u32], k: usize| -> u32 {
        support.iter().fold(0, |acc, &(i, c)| {
            let t = f.mul_raw(c, h[(k + n - i) % n]);
            if i <= k {
                f.add_raw(acc, t)
            } else {
                f.sub_raw(acc, t)
            }
        })
    };
    let hits = par_scan(q, n, |h| (0..n).all(|k| coeff(h, k) == w[k]));
    let mut count = 0;
    for idx in hits {
        if nega::double_criterion(&h_from_index(&f, n, idx), n)? {
            count += 1;
        }
    }
    Ok(Containment { count, bound: containment_bound(ctx.p, ctx.q) })
}

/// `count` seeded random nonzero vectors of length `len` and weight `< max_weight`.
pub fn random_low_weight_vectors(field: &Field, len: usize, max_weight: usize, count: usize, seed: u64) -> Vec<Vec<u32>> {
    let q = field.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = max_weight.saturating_sub(1).min(len).max(1);
    (0..count)
        .map(|_| {
            let weight = rng.gen_range(1..=top);
            let mut u = vec![0u32; len];
            for pos in rand::seq::index::sample(&mut rng, len, weight) {
                u[pos] = rng.gen_range(1..q);
            }
            u
        })
        .collect()
}

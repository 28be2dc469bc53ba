//! Negacirculant matrices and the double/four-negacirculant codes built from them.
//!
//! `F_q[x]/(x^n + 1)` acts on `F_q^n` through the negashift, so a polynomial
//! `a` of degree `< n` corresponds to the matrix whose rows are `a, x·a, …,
//! x^{n-1}·a` reduced modulo `x^n + 1`. Transposition corresponds to the
//! involution [`prime_map`], `a(x) ↦ a(-x^{n-1})`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::Poly;

/// The constashift `T_λ: (x_0, …, x_{N-1}) ↦ (λ·x_{N-1}, x_0, …, x_{N-2})`.
pub fn negashift(field: &Field, v: &[u32], lambda: u32) -> Result<Vec<u32>> {
    let Some((&last, rest)) = v.split_last() else {
        return invalid("constashift of an empty vector");
    };
    let mut out = Vec::with_capacity(v.len());
    out.push(field.mul_raw(lambda, last));
    out.extend_from_slice(rest);
    Ok(out)
}

/// `a mod x^n + 1`.
pub fn reduce_negacyclic(a: &Poly, n: usize) -> Poly {
    let f = a.field();
    let mut out = vec![0u32; n];
    for (i, &c) in a.raw().iter().enumerate() {
        let (k, wrapped) = (i % n, (i / n) % 2 == 1);
        let c = if wrapped { f.neg_raw(c) } else { c };
        out[k] = f.add_raw(out[k], c);
    }
    Poly::from_raw(f, out)
}

/// `a · b mod x^n + 1`.
pub fn negacyclic_mul(a: &Poly, b: &Poly, n: usize) -> Result<Poly> {
    Ok(reduce_negacyclic(&a.try_mul(b)?, n))
}

fn check_degree(a: &Poly, n: usize) -> Result<()> {
    if n == 0 {
        return invalid("order n must be positive");
    }
    match a.degree() {
        Some(d) if d >= n => invalid(format!("degree {d} is not below n = {n}")),
        _ => Ok(()),
    }
}

/// `a'(x) = a(-x^{n-1}) mod x^n + 1`, as the signed permutation
/// `a'_0 = a_0`, `a'_{n-i} = -a_i`.
pub fn prime_map(a: &Poly, n: usize) -> Result<Poly> {
    check_degree(a, n)?;
    let f = a.field();
    let mut out = vec![0u32; n];
    for (i, &c) in a.raw().iter().enumerate() {
        if i == 0 {
            out[0] = c;
        } else {
            out[n - i] = f.neg_raw(c);
        }
    }
    Ok(Poly::from_raw(f, out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegacirculantMatrix {
    pub n: usize,
    pub first_row: Poly,
    pub matrix: Matrix,
}

/// The negacirculant matrix with first row `a`, built by successive negashifts.
///
/// For `n ≤ 8` the result is also checked against `a(N)`, `N` being the
/// negacirculant matrix of `x`.
pub fn nega_matrix(a: &Poly, n: usize) -> Result<NegacirculantMatrix> {
    check_degree(a, n)?;
    let f = a.field();
    let minus_one = f.minus_one_raw();
    let mut rows = Vec::with_capacity(n);
    let mut row = a.raw_padded(n);
    for _ in 0..n {
        let next = negashift(f, &row, minus_one)?;
        rows.push(row);
        row = next;
    }
    let matrix = Matrix::from_rows(f, &rows)?;
    if n <= 8 && matrix != eval_at_shift(a, n)? {
        return Err(Error::Audit(format!("negashift matrix of {a} differs from a(N)")));
    }
    Ok(NegacirculantMatrix { n, first_row: a.clone(), matrix })
}

/// `Σ a_i N^i` with `N` the negashift matrix.
fn eval_at_shift(a: &Poly, n: usize) -> Result<Matrix> {
    let f = a.field();
    let mut shift = Matrix::zeros(f, n, n);
    for i in 0..n - 1 {
        shift.set(i, i + 1, 1);
    }
    shift.set(n - 1, 0, f.minus_one_raw());
    let mut power = Matrix::identity(f, n);
    let mut acc = Matrix::zeros(f, n, n);
    for &c in a.raw() {
        let mut term = power.clone();
        for r in 0..n {
            for col in 0..n {
                term.set(r, col, f.mul_raw(c, power.get(r, col)));
            }
        }
        acc = acc.try_add(&term)?;
        power = power.try_mul(&shift)?;
    }
    Ok(acc)
}

/// Any code given by a generator matrix.
pub trait LinearCode {
    fn generator(&self) -> &Matrix;

    fn length(&self) -> usize {
        self.generator().cols()
    }

    fn dimension(&self) -> usize {
        self.generator().rank()
    }

    /// `G·Gᵗ = 0` together with `2k = N`.
    fn is_self_dual(&self) -> bool {
        let g = self.generator();
        let gram = g.try_mul(&g.transpose()).expect("shapes agree");
        gram.is_zero() && 2 * self.dimension() == self.length()
    }

    fn summary(&self, min_distance: Option<usize>) -> CodeSummary {
        CodeSummary {
            length: self.length(),
            dimension: self.dimension(),
            min_distance,
            self_dual: self.is_self_dual(),
        }
    }
}

pub fn is_self_dual(code: &impl LinearCode) -> bool {
    code.is_self_dual()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub length: usize,
    pub dimension: usize,
    pub min_distance: Option<usize>,
    pub self_dual: bool,
}

/// `C_h`, generated by `(I_n | H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleNegaCode {
    pub n: usize,
    pub h: Poly,
    generator: Matrix,
}

impl LinearCode for DoubleNegaCode {
    fn generator(&self) -> &Matrix {
        &self.generator
    }

    fn dimension(&self) -> usize {
        self.n
    }
}

pub fn build_double(h: &Poly, n: usize) -> Result<DoubleNegaCode> {
    let f = h.field();
    let hm = nega_matrix(h, n)?;
    let generator = Matrix::block(f, &[vec![&Matrix::identity(f, n), &hm.matrix]])?;
    Ok(DoubleNegaCode { n, h: h.clone(), generator })
}

/// `C_{a,b}`, generated by `(I 0 A B; 0 I -Bᵗ Aᵗ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourNegaCode {
    pub n: usize,
    pub a: Poly,
    pub b: Poly,
    generator: Matrix,
}

impl LinearCode for FourNegaCode {
    fn generator(&self) -> &Matrix {
        &self.generator
    }

    fn dimension(&self) -> usize {
        2 * self.n
    }
}

pub fn build_four(a: &Poly, b: &Poly, n: usize) -> Result<FourNegaCode> {
    let f = a.field();
    f.check_same(b.field())?;
    let am = nega_matrix(a, n)?.matrix;
    let bm = nega_matrix(b, n)?.matrix;
    let at = nega_matrix(&prime_map(a, n)?, n)?.matrix;
    let neg_bt = nega_matrix(&prime_map(b, n)?, n)?.matrix.neg();
    let (id, zero) = (Matrix::identity(f, n), Matrix::zeros(f, n, n));
    let generator = Matrix::block(f, &[vec![&id, &zero, &am, &bm], vec![&zero, &id, &neg_bt, &at]])?;
    Ok(FourNegaCode { n, a: a.clone(), b: b.clone(), generator })
}

/// `A·Aᵗ + B·Bᵗ + I = 0`, evaluated on the matrices.
pub fn prop21_check(a: &NegacirculantMatrix, b: &NegacirculantMatrix) -> Result<bool> {
    if a.n != b.n {
        return invalid(format!("orders differ: {} vs {}", a.n, b.n));
    }
    let (am, bm) = (&a.matrix, &b.matrix);
    let sum = am
        .try_mul(&am.transpose())?
        .try_add(&bm.try_mul(&bm.transpose())?)?
        .try_add(&Matrix::identity(am.field(), a.n))?;
    Ok(sum.is_zero())
}

/// `1 + h·h' ≡ 0 mod x^n + 1`.
pub fn double_criterion(h: &Poly, n: usize) -> Result<bool> {
    let hh = negacyclic_mul(h, &prime_map(h, n)?, n)?;
    Ok((&hh + &Poly::one(h.field())).is_zero())
}

/// `1 + a·a' + b·b' ≡ 0 mod x^n + 1`.
pub fn four_criterion(a: &Poly, b: &Poly, n: usize) -> Result<bool> {
    let aa = negacyclic_mul(a, &prime_map(a, n)?, n)?;
    let bb = negacyclic_mul(b, &prime_map(b, n)?, n)?;
    Ok((&(&aa + &bb) + &Poly::one(a.field())).is_zero())
}

/// Default cap on `q^k` for [`min_distance`].
pub const DEFAULT_DISTANCE_BUDGET: u64 = 100_000_000;

/// Minimum Hamming weight of the nonzero codewords spanned by `generator`.
///
/// Messages are normalized so their first nonzero coordinate is `1`, and the
/// remaining coordinates are walked as digits over the prime field so that
/// each step adds one precomputed (scaled) generator row. The work is split
/// into independent ranges whose minima are merged, so the answer does not
/// depend on the thread pool.
pub fn min_distance(generator: &Matrix, budget: Option<u64>) -> Result<usize> {
    let f = generator.field();
    let k = generator.rows();
    if k == 0 {
        return invalid("code has no nonzero codewords");
    }
    let budget = budget.unwrap_or(DEFAULT_DISTANCE_BUDGET);
    let q = f.order() as u64;
    let space = u32::try_from(k)
        .ok()
        .and_then(|k| q.checked_pow(k))
        .filter(|&s| s <= budget)
        .ok_or_else(|| Error::Infeasible(format!("q^k = {q}^{k} exceeds the budget {budget}")))?;
    log::debug!("min_distance: {space} messages, length {}", generator.cols());

    let p = f.characteristic();
    let e = f.degree() as usize;
    // scaled[j * e + t] = p^t · row_j, kept sparse
    let mut scaled: Vec<Vec<(usize, u32)>> = Vec::with_capacity(k * e);
    for j in 0..k {
        let mut beta = 1u32;
        for _ in 0..e {
            let row = generator
                .row(j)
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| (c, f.mul_raw(beta, v)))
                .collect();
            scaled.push(row);
            beta *= p;
        }
    }

    let mut tasks = Vec::new();
    for lead in 0..k {
        let digits = (k - 1 - lead) * e;
        let mut fixed = 0;
        while fixed < digits && (p as u64).pow(fixed as u32) < 64 {
            fixed += 1;
        }
        for prefix in 0..(p as u64).pow(fixed as u32) {
            tasks.push(Task { lead, digits, fixed, prefix });
        }
    }
    let best = tasks
        .par_iter()
        .map(|t| t.run(f, generator, &scaled, e))
        .min()
        .expect("at least one task");
    Ok(best)
}

struct Task {
    lead: usize,
    digits: usize,
    fixed: usize,
    prefix: u64,
}

impl Task {
    fn run(&self, f: &Field, g: &Matrix, scaled: &[Vec<(usize, u32)>], e: usize) -> usize {
        if f.is_prime_field() {
            let p = f.characteristic();
            self.walk(p, g, scaled, e, move |a, b| {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
        } else {
            self.walk(f.characteristic(), g, scaled, e, |a, b| f.add_raw(a, b))
        }
    }

    #[inline(always)]
    fn walk<A>(&self, p: u32, g: &Matrix, scaled: &[Vec<(usize, u32)>], e: usize, add_raw: A) -> usize
    where
        A: Fn(u32, u32) -> u32,
    {
        let first = (self.lead + 1) * e;
        let mut word = g.row(self.lead).to_vec();
        let add = |word: &mut [u32], row: &[(usize, u32)]| -> isize {
            let mut delta = 0isize;
            for &(c, v) in row {
                let old = word[c];
                let new = add_raw(old, v);
                word[c] = new;
                delta += (new != 0) as isize - (old != 0) as isize;
            }
            delta
        };
        // The fixed digits are the most significant ones.
        let free = self.digits - self.fixed;
        let mut rest = self.prefix;
        for d in free..self.digits {
            for _ in 0..rest % p as u64 {
                add(&mut word, &scaled[first + d]);
            }
            rest /= p as u64;
        }
        let mut weight = word.iter().filter(|&&v| v != 0).count() as isize;
        let mut best = weight;
        let mut counter = vec![0u32; free];
        loop {
            let mut d = 0;
            while d < free {
                weight += add(&mut word, &scaled[first + d]);
                counter[d] += 1;
                if counter[d] < p {
                    break;
                }
                counter[d] = 0;
                d += 1;
            }
            if d == free {
                break;
            }
            best = best.min(weight);
        }
        best as usize
    }
}

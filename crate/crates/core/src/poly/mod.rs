//! Univariate polynomials over a finite field.
//!
//! Coefficients are stored in ascending degree as raw field values and are
//! kept normalized: no trailing zeros, the zero polynomial is empty.

mod cyclotomic;
mod factor;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::field::{Field, FieldElement};

pub use cyclotomic::{cyclotomic, integer_cyclotomic};
pub use factor::{factorize, factorize_with_seed, FactorizationResult, DEFAULT_FACTOR_SEED};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from raw field values (ascending degree), trimming trailing zeros.
    pub fn from_raw(field: &Field, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|&c| c < field.order()));
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_elements(field: &Field, coeffs: &[FieldElement]) -> Result<Self> {
        let mut raw = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            field.check_same(c.field())?;
            raw.push(c.raw());
        }
        Ok(Self::from_raw(field, raw))
    }

    /// Integer coefficients mapped through the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Self::from_raw(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Field, c: u32) -> Self {
        Self::from_raw(field, vec![c])
    }

    pub fn x(field: &Field) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn monomial(field: &Field, c: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_raw(field, coeffs)
    }

    /// `x^n + 1`.
    pub fn xn_plus_one(field: &Field, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = 1;
        coeffs[n] = field.add_raw(coeffs[n], 1);
        Self::from_raw(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn raw(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficients padded with zeros to length `n`.
    pub fn raw_padded(&self, n: usize) -> Vec<u32> {
        let mut v = self.coeffs.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    pub fn coeff_raw(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.element(self.coeff_raw(i)).expect("in range")
    }

    pub fn leading_raw(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval_raw(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.add_raw(self.field.mul_raw(acc, x), c))
    }

    pub fn scale_raw(&self, c: u32) -> Self {
        let f = &self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul_raw(a, c)).collect())
    }

    /// Monic associate; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.field.inv_raw(self.leading_raw()) {
            Some(inv) if inv != 1 => self.scale_raw(inv),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul_raw(c, f.from_int(i as i64)))
            .collect();
        Self::from_raw(f, coeffs)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        self.field.check_same(&other.field)
    }

    pub fn try_add(&self, rhs: &Poly) -> Result<Poly> {
        self.check(rhs)?;
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add_raw(self.coeff_raw(i), rhs.coeff_raw(i)))
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn try_sub(&self, rhs: &Poly) -> Result<Poly> {
        self.try_add(&-rhs)
    }

    pub fn try_mul(&self, rhs: &Poly) -> Result<Poly> {
        self.check(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        if f.is_prime_field() {
            // Accumulate in u64 and reduce once per output coefficient.
            let p = f.characteristic() as u64;
            let mut acc = vec![0u64; out.len()];
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in rhs.coeffs.iter().enumerate() {
                    acc[i + j] += a as u64 * b as u64;
                }
                if i % 1024 == 1023 {
                    acc.iter_mut().for_each(|v| *v %= p);
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = (a % p) as u32;
            }
        } else {
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in rhs.coeffs.iter().enumerate() {
                    out[i + j] = f.add_raw(out[i + j], f.mul_raw(a, b));
                }
            }
        }
        Ok(Self::from_raw(f, out))
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        let f = &self.field;
        let Some(dd) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = f.inv_raw(divisor.leading_raw()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let factor = f.mul_raw(c, lead_inv);
            quot[k - dd] = factor;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = f.sub_raw(rem[idx], f.mul_raw(factor, d));
            }
        }
        rem.truncate(dd);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Audit(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `(g, s, t)` with `g = s·self + t·other` monic.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check(other)?;
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        let Some(inv) = f.inv_raw(r0.leading_raw()) else {
            return Ok((r0, s0, t0));
        };
        Ok((r0.scale_raw(inv), s0.scale_raw(inv), t0.scale_raw(inv)))
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Poly) -> Result<Option<Poly>> {
        let (g, s, _) = self.rem(m)?.ext_gcd(m)?;
        if g.is_one() {
            Ok(Some(s.rem(m)?))
        } else {
            Ok(None)
        }
    }

    /// `self^k mod m` by repeated squaring.
    pub fn modexp(&self, k: u128, m: &Poly) -> Result<Poly> {
        self.check(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut result = Self::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = (&result * &base).rem(m)?;
            }
            base = (&base * &base).rem(m)?;
            k >>= 1;
        }
        Ok(result)
    }

    /// `self^(q^m) mod modulus` where `q` is the field order, by `m` successive `q`-th powers.
    pub fn frobenius_mod(&self, m: u32, modulus: &Poly) -> Result<Poly> {
        let q = self.field.order() as u128;
        let mut out = self.rem(modulus)?;
        for _ in 0..m {
            out = out.modexp(q, modulus)?;
        }
        Ok(out)
    }

    /// Substitutes `x ↦ g` (Horner).
    pub fn compose(&self, g: &Poly) -> Result<Poly> {
        self.check(g)?;
        let f = &self.field;
        let mut out = Self::zero(f);
        for &c in self.coeffs.iter().rev() {
            out = &(&out * g) + &Self::constant(f, c);
        }
        Ok(out)
    }

    /// Monic normalization of `x^deg · f(1/x)`.
    pub fn reciprocal(&self) -> Result<Poly> {
        if self.coeff_raw(0) == 0 {
            return invalid("reciprocal needs a nonzero constant term");
        }
        let mut rev = self.coeffs.clone();
        rev.reverse();
        Ok(Self::from_raw(&self.field, rev).monic())
    }

    pub fn is_self_reciprocal(&self) -> Result<bool> {
        if self.is_zero() {
            return invalid("zero polynomial");
        }
        let m = self.monic();
        if m.coeff_raw(0) == 0 {
            return Ok(false);
        }
        Ok(m.reciprocal()? == m)
    }

    /// Rabin's test: `x^{q^d} ≡ x (mod f)` and `gcd(x^{q^{d/r}} - x, f) = 1` for primes `r | d`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return invalid("irreducibility is defined for degree >= 1"),
        };
        if d == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let x = Self::x(&self.field);
        let primes: Vec<usize> = arith::factorize(d as u64).into_iter().map(|(r, _)| r as usize).collect();
        for r in primes {
            let h = x.frobenius_mod((d / r) as u32, &f)?;
            if !(&h - &x).gcd(&f)?.is_one() {
                return Ok(false);
            }
        }
        Ok(x.frobenius_mod(d as u32, &f)? == x.rem(&f)?)
    }

    /// Ordering used for factor lists: degree first, then coefficients from the constant term up.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Canonical text form: coefficients ascending, comma-separated; each
    /// extension-field coefficient is its residues joined by `;`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|&c| self.field.format_raw(c, ';'))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(field: &Field, text: &str) -> Result<Poly> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let coeffs = text
            .split(',')
            .map(|c| field.parse_raw(c, ';'))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(field, coeffs))
    }

    /// Human-readable form such as `x^2+5x+1`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if self.field.is_prime_field() {
                c.to_string()
            } else {
                format!("({})", self.field.format_raw(c, ';'))
            };
            let term = match (i, c == 1) {
                (0, _) => coef,
                (1, true) => "x".into(),
                (1, false) => format!("{coef}x"),
                (_, true) => format!("x^{i}"),
                (_, false) => format!("{coef}x^{i}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly<{:?}>({})", self.field, self.pretty())
    }
}

// Operators panic on field mismatch; the `try_*` methods return an error instead.
impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomials over different fields")
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomials over different fields")
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomials over different fields")
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg_raw(c)).collect())
    }
}

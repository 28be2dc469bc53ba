//! Exact arithmetic in prime fields `F_p` and extension fields `F_{p^e}`.
//!
//! An element of `F_{p^e}` is a residue vector `(c_0, …, c_{e-1})` over the
//! prime field, read as `Σ c_i α^i` where `α` is a root of the field's
//! modulus. Internally an element is packed into a single `u32` value
//! `Σ c_i p^i`; [`Field`] exposes the raw arithmetic on those values for hot
//! loops and [`FieldElement`] wraps a value with its field for the checked
//! public API.
//!
//! The modulus of `F_{p^e}` is the smallest monic irreducible polynomial of
//! degree `e` when coefficient vectors are compared entry-wise from the
//! constant term up, so the representation is reproducible everywhere.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::poly::Poly;

/// Orders up to this bound get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 16;
/// Field orders must fit comfortably in `u32` so products fit in `u64`.
pub const MAX_ORDER: u64 = (1 << 31) - 1;

#[derive(Debug)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Parameters of `F_{p^e}`. Immutable once built; shared through [`Field`].
#[derive(Debug)]
pub struct FieldSpec {
    characteristic: u32,
    degree: u32,
    order: u32,
    /// Monic modulus, ascending coefficients, length `degree + 1`. `None` for prime fields.
    modulus: Option<Vec<u32>>,
    tables: Option<LogTables>,
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree == 1
    }
}

/// Cheaply clonable handle to a [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl Deref for Field {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.characteristic == other.characteristic
                && self.degree == other.degree
                && self.modulus == other.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order)
    }
}

fn field_cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Builds (or fetches from the process-wide cache) the field `F_{p0^e}`.
pub fn make_field(p0: u64, e: u32) -> Result<Field> {
    if e < 1 {
        return invalid("extension degree must be at least 1");
    }
    if !arith::is_prime(p0) {
        return invalid(format!("characteristic {p0} is not prime"));
    }
    let order = (p0 as u128).checked_pow(e).filter(|&q| q <= MAX_ORDER as u128);
    let Some(order) = order else {
        return invalid(format!("field order {p0}^{e} exceeds {MAX_ORDER}"));
    };
    let key = (p0 as u32, e);
    if let Some(f) = field_cache().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let field = build_field(p0 as u32, e, order as u32)?;
    let mut cache = field_cache().lock().unwrap();
    Ok(cache.entry(key).or_insert(field).clone())
}

/// Field of `q` elements for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Field> {
    match arith::prime_power(q) {
        Some((p, e)) => make_field(p, e),
        None => invalid(format!("{q} is not a prime power")),
    }
}

fn build_field(p: u32, e: u32, order: u32) -> Result<Field> {
    if e == 1 {
        return Ok(Field(Arc::new(FieldSpec {
            characteristic: p,
            degree: 1,
            order,
            modulus: None,
            tables: None,
        })));
    }
    let prime = make_field(p as u64, 1)?;
    let modulus = smallest_irreducible(&prime, e as usize);
    let mut spec = FieldSpec {
        characteristic: p,
        degree: e,
        order,
        modulus: Some(modulus),
        tables: None,
    };
    if (order as u64) <= TABLE_LIMIT {
        spec.tables = Some(build_tables(&spec));
    }
    Ok(Field(Arc::new(spec)))
}

/// Smallest monic irreducible of degree `e`, comparing `(c_0, c_1, …)` entry-wise.
fn smallest_irreducible(prime: &Field, e: usize) -> Vec<u32> {
    let p = prime.order() as u64;
    let count = p.pow(e as u32);
    for t in 0..count {
        // c_0 is the most significant digit of t.
        let mut coeffs = vec![0u32; e + 1];
        let mut rest = t;
        for i in (0..e).rev() {
            coeffs[i] = (rest % p) as u32;
            rest /= p;
        }
        coeffs[e] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        let f = Poly::from_raw(prime, coeffs.clone());
        if f.is_irreducible().unwrap_or(false) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_tables(spec: &FieldSpec) -> LogTables {
    let q = spec.order as usize;
    // Search the smallest value generating the multiplicative group.
    let group = (q - 1) as u64;
    let factors: Vec<u64> = arith::factorize(group).into_iter().map(|(r, _)| r).collect();
    let generator = (2..q as u32)
        .find(|&g| {
            factors
                .iter()
                .all(|&r| slow_pow(spec, g, group / r) != 1)
        })
        .unwrap_or(1);
    let mut exp = vec![0u32; q - 1];
    let mut log = vec![0u32; q];
    let mut x = 1u32;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x;
        log[x as usize] = i as u32;
        x = slow_mul(spec, x, generator);
    }
    LogTables { exp, log }
}

fn digits(spec: &FieldSpec, mut v: u32) -> Vec<u32> {
    let p = spec.characteristic;
    (0..spec.degree)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn pack(spec: &FieldSpec, digits: &[u32]) -> u32 {
    let p = spec.characteristic;
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Schoolbook multiplication modulo the field polynomial.
fn slow_mul(spec: &FieldSpec, a: u32, b: u32) -> u32 {
    let p = spec.characteristic as u64;
    let e = spec.degree as usize;
    let (da, db) = (digits(spec, a), digits(spec, b));
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    let m = spec.modulus.as_ref().expect("extension field");
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        // x^k = x^{k-e} · x^e and x^e = -Σ m_i x^i.
        for i in 0..e {
            prod[k - e + i] = (prod[k - e + i] + (p - c) * m[i] as u64) % p;
        }
        prod[k] = 0;
    }
    let out: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
    pack(spec, &out)
}

fn slow_pow(spec: &FieldSpec, a: u32, mut exp: u64) -> u32 {
    let mut result = 1u32;
    let mut base = a;
    while exp > 0 {
        if exp & 1 == 1 {
            result = slow_mul(spec, result, base);
        }
        base = slow_mul(spec, base, base);
        exp >>= 1;
    }
    result
}

impl Field {
    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn check_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.order as u64,
                right: other.order as u64,
            })
        }
    }

    #[inline]
    pub fn zero_raw(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one_raw(&self) -> u32 {
        1
    }

    /// Raw value of `-1`.
    #[inline]
    pub fn minus_one_raw(&self) -> u32 {
        self.neg_raw(1)
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.characteristic as i64) as u32
    }

    #[inline]
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.characteristic;
        if self.degree == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn neg_raw(&self, a: u32) -> u32 {
        let p = self.characteristic;
        if self.degree == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            let d = a % p;
            out += ((p - d) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return ((a as u64 * b as u64) % self.characteristic as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u32;
                let s = t.log[a as usize] + t.log[b as usize];
                t.exp[(if s >= n { s - n } else { s }) as usize]
            }
            None => slow_mul(self, a, b),
        }
    }

    pub fn pow_raw(&self, a: u32, exp: u128) -> u32 {
        if exp == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        // Exponents only matter modulo the group order.
        let group = (self.order - 1) as u128;
        let mut e = exp % group;
        if e == 0 {
            return 1;
        }
        if let Some(t) = &self.tables {
            let l = (t.log[a as usize] as u128 * e) % group;
            return t.exp[l as usize];
        }
        let mut result = 1u32;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_raw(result, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        result
    }

    pub fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let n = t.exp.len() as u32;
            let l = t.log[a as usize];
            return Some(t.exp[((n - l) % n) as usize]);
        }
        if self.degree == 1 {
            return arith::inv_mod(a as u64, self.characteristic as u64).map(|v| v as u32);
        }
        Some(self.pow_raw(a, self.order as u128 - 2))
    }

    /// `a^(base^m)`, computed with the exponent reduced modulo `q - 1`.
    pub fn frobenius_raw(&self, a: u32, base: u64, m: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let group = (self.order - 1) as u64;
        if group == 1 {
            return a;
        }
        let mut e = 1u64;
        for _ in 0..m {
            e = arith::mul_mod(e, base % group, group);
        }
        if e == 0 {
            e = group;
        }
        self.pow_raw(a, e as u128)
    }

    pub fn order_raw(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut order = (self.order - 1) as u64;
        for (r, _) in arith::factorize(order) {
            while order.is_multiple_of(r) && self.pow_raw(a, (order / r) as u128) == 1 {
                order /= r;
            }
        }
        Some(order)
    }

    pub fn coefficients_raw(&self, a: u32) -> Vec<u32> {
        digits(self, a)
    }

    pub fn pack_raw(&self, coefficients: &[u32]) -> Result<u32> {
        if coefficients.len() > self.degree as usize {
            return invalid(format!(
                "{} residues given for a degree-{} field",
                coefficients.len(),
                self.degree
            ));
        }
        if let Some(&c) = coefficients.iter().find(|&&c| c >= self.characteristic) {
            return invalid(format!("residue {c} out of range mod {}", self.characteristic));
        }
        let mut padded = coefficients.to_vec();
        padded.resize(self.degree as usize, 0);
        Ok(pack(self, &padded))
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.order {
            return invalid(format!("value {value} out of range for F_{}", self.order));
        }
        Ok(FieldElement { field: self.clone(), value })
    }

    pub fn from_coefficients(&self, coefficients: &[u32]) -> Result<FieldElement> {
        let value = self.pack_raw(coefficients)?;
        Ok(FieldElement { field: self.clone(), value })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: 1 }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |value| FieldElement { field: self.clone(), value })
    }

    /// Smallest value generating the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        let group = (self.order - 1) as u64;
        let value = (1..self.order)
            .find(|&g| self.order_raw(g) == Some(group))
            .expect("finite fields are cyclic");
        FieldElement { field: self.clone(), value }
    }

    /// Text form of a raw value: residues joined by `sep`, ascending degree.
    pub fn format_raw(&self, a: u32, sep: char) -> String {
        let ds = digits(self, a);
        let mut out = String::new();
        for (i, d) in ds.iter().enumerate() {
            if i > 0 {
                out.push(sep);
            }
            out.push_str(&d.to_string());
        }
        out
    }

    pub fn parse_raw(&self, text: &str, sep: char) -> Result<u32> {
        let residues = text
            .split(sep)
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad residue {t:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if residues.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        self.pack_raw(&residues).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// An element of a specific finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Packed representation; only meaningful together with [`Self::field`].
    pub fn raw(&self) -> u32 {
        self.value
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.field.coefficients_raw(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn with(&self, value: u32) -> Self {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.field.check_same(&rhs.field)?;
        Ok(self.with(self.field.add_raw(self.value, rhs.value)))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.field.check_same(&rhs.field)?;
        Ok(self.with(self.field.sub_raw(self.value, rhs.value)))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.field.check_same(&rhs.field)?;
        Ok(self.with(self.field.mul_raw(self.value, rhs.value)))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.field.check_same(&rhs.field)?;
        let inv = rhs.field.inv_raw(rhs.value).ok_or(Error::DivisionByZero)?;
        Ok(self.with(self.field.mul_raw(self.value, inv)))
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self.field.inv_raw(self.value).ok_or(Error::DivisionByZero)?;
        Ok(self.with(v))
    }

    pub fn pow(&self, exp: u128) -> Self {
        self.with(self.field.pow_raw(self.value, exp))
    }

    /// `self^(base^m)`. With `base` the order of a subfield over which the
    /// field has even degree `2m'`, `m = m'` gives the conjugation.
    pub fn frobenius(&self, base: u64, m: u32) -> Self {
        self.with(self.field.frobenius_raw(self.value, base, m))
    }

    pub fn order(&self) -> Result<u64> {
        self.field
            .order_raw(self.value)
            .ok_or_else(|| Error::InvalidInput("zero has no multiplicative order".into()))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_raw(self.value, ','))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field.order, self)
    }
}

// Operator forms panic on a field mismatch; use the `try_*` methods to get an error instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("operands from different fields")
            }
        }

        impl $trait for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        self.with(self.field.neg_raw(self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

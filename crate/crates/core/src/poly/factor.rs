//! Complete factorization over `F_q`: square-free decomposition, then
//! distinct-degree splitting, then Cantor–Zassenhaus equal-degree splitting.
//!
//! Equal-degree splitting draws random polynomials from a ChaCha stream
//! seeded by the input polynomial and a global seed, so results and running
//! time are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{invalid, Result};
use crate::field::FieldElement;

pub const DEFAULT_FACTOR_SEED: u64 = 0x6e65_6761_6369_7263;

/// `leading · Π factor^multiplicity`, factors monic irreducible and sorted by
/// [`Poly::canonical_cmp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationResult {
    pub leading: FieldElement,
    pub factors: Vec<(Poly, u32)>,
}

impl FactorizationResult {
    pub fn product(&self) -> Poly {
        let field = self.leading.field();
        let mut acc = Poly::constant(field, self.leading.raw());
        for (g, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * g;
            }
        }
        acc
    }

    pub fn factor_count(&self) -> usize {
        self.factors.iter().map(|(_, m)| *m as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|(g, m)| std::iter::repeat_n(g.degree().unwrap_or(0), *m as usize))
            .collect()
    }

    pub fn is_sorted(&self) -> bool {
        self.factors
            .windows(2)
            .all(|w| w[0].0.canonical_cmp(&w[1].0).is_lt())
    }
}

pub fn factorize(f: &Poly) -> Result<FactorizationResult> {
    factorize_with_seed(f, DEFAULT_FACTOR_SEED)
}

pub fn factorize_with_seed(f: &Poly, seed: u64) -> Result<FactorizationResult> {
    match f.degree() {
        Some(d) if d >= 1 => {}
        _ => return invalid("factorization needs a polynomial of degree >= 1"),
    }
    let field = f.field().clone();
    let leading = field.element(f.leading_raw())?;
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, &monic));

    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in square_free(&monic)? {
        for (block, d) in distinct_degree(&part)? {
            for g in equal_degree(&block, d, &mut rng)? {
                match factors.iter_mut().find(|(h, _)| *h == g) {
                    Some((_, m)) => *m += mult,
                    None => factors.push((g, mult)),
                }
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(FactorizationResult { leading, factors })
}

fn mix_seed(seed: u64, f: &Poly) -> u64 {
    // splitmix64 folded over the field order and the coefficients
    let mut state = seed ^ (f.field().order() as u64).rotate_left(32);
    let mut next = |v: u64| {
        state = state.wrapping_add(v).wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    };
    for &c in f.raw() {
        next(c as u64);
    }
    state
}

/// Square-free decomposition of a monic polynomial: pairs `(part, i)` with
/// `f = Π part^i` and each `part` square-free.
fn square_free(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let field = f.field();
    let p = field.characteristic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let fp = f.derivative();
    if fp.is_zero() {
        for (h, m) in square_free(&pth_root(f))? {
            out.push((h, m * p));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&fp)?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let z = w.exact_div(&y)?;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w)?;
    }
    if !c.is_one() {
        for (h, m) in square_free(&pth_root(&c))? {
            out.push((h, m * p));
        }
    }
    Ok(out)
}

/// `g` with `g^p = f`, for `f` whose exponents are all multiples of `p`.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    // a^(1/p) = a^(q/p) in F_q
    let root_exp = (field.order() / field.characteristic()) as u128;
    let coeffs = f
        .raw()
        .iter()
        .step_by(p)
        .map(|&c| field.pow_raw(c, root_exp))
        .collect();
    Poly::from_raw(field, coeffs)
}

/// Splits a monic square-free polynomial into blocks whose irreducible factors share a degree.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field();
    let q = field.order() as u128;
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.modexp(q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    Ok(out)
}

/// Cantor–Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field();
    let q = field.order();
    loop {
        let coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let a = Poly::from_raw(field, coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let splitter = if q % 2 == 1 {
            // a^((q^d - 1)/2) = (a^(1 + q + … + q^(d-1)))^((q - 1)/2)
            let mut s = a.clone();
            let mut t = a.clone();
            for _ in 1..d {
                t = t.modexp(q as u128, f)?;
                s = (&s * &t).rem(f)?;
            }
            &s.modexp(((q - 1) / 2) as u128, f)? - &Poly::one(field)
        } else {
            // absolute trace to F_2
            let k = field.degree() as usize * d;
            let mut t = a.rem(f)?;
            let mut acc = t.clone();
            for _ in 1..k {
                t = (&t * &t).rem(f)?;
                acc = &acc + &t;
            }
            acc
        };
        let g = splitter.gcd(f)?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut left = equal_degree(&g, d, rng)?;
            left.extend(equal_degree(&f.exact_div(&g)?, d, rng)?);
            return Ok(left);
        }
    }
}

//! Cyclotomic polynomials, computed exactly over the integers and then reduced.

use std::collections::BTreeMap;

use super::Poly;
use crate::error::{invalid, Error, Result};
use crate::field::Field;

/// Integer coefficients of `Q_r`, ascending degree.
///
/// `Q_r = (x^r - 1) / Π_{d | r, d < r} Q_d`, dividing out one factor at a time.
pub fn integer_cyclotomic(r: u64) -> Result<Vec<i128>> {
    if r == 0 {
        return invalid("cyclotomic index must be positive");
    }
    let mut memo = BTreeMap::new();
    build(r, &mut memo)
}

fn build(r: u64, memo: &mut BTreeMap<u64, Vec<i128>>) -> Result<Vec<i128>> {
    if let Some(c) = memo.get(&r) {
        return Ok(c.clone());
    }
    let mut num = vec![0i128; r as usize + 1];
    num[0] = -1;
    num[r as usize] = 1;
    for d in (1..r).filter(|d| r.is_multiple_of(*d)) {
        let qd = build(d, memo)?;
        num = exact_div_int(&num, &qd)?;
    }
    memo.insert(r, num.clone());
    Ok(num)
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div_int(num: &[i128], den: &[i128]) -> Result<Vec<i128>> {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        quot[k - dd] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k - dd + i] = d
                .checked_mul(c)
                .and_then(|v| rem[k - dd + i].checked_sub(v))
                .ok_or_else(|| Error::InvalidInput("cyclotomic coefficient overflow".into()))?;
        }
    }
    if rem[..dd].iter().any(|&c| c != 0) {
        return Err(Error::Audit("inexact cyclotomic division".into()));
    }
    Ok(quot)
}

/// `Q_r` reduced into `field`; requires the characteristic not to divide `r`.
pub fn cyclotomic(r: u64, field: &Field) -> Result<Poly> {
    if r == 0 {
        return invalid("cyclotomic index must be positive");
    }
    let p = field.characteristic() as u64;
    if r.is_multiple_of(p) {
        return invalid(format!("characteristic {p} divides {r}"));
    }
    let coeffs = integer_cyclotomic(r)?;
    let raw = coeffs
        .iter()
        .map(|&c| c.rem_euclid(p as i128) as u32)
        .collect();
    Ok(Poly::from_raw(field, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize as int_factorize, totient};
    use crate::field::field_of_order;
    use crate::poly::factorize;

    fn mobius(n: u64) -> i32 {
        let f = int_factorize(n);
        if f.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    fn int_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Oracle: Q_r = Π_{d|r} (x^d - 1)^{μ(r/d)}, as numerator / denominator.
    fn mobius_cyclotomic(r: u64) -> Vec<i128> {
        let mut num = vec![1i128];
        let mut den = vec![1i128];
        for d in (1..=r).filter(|d| r.is_multiple_of(*d)) {
            let mut term = vec![0i128; d as usize + 1];
            term[0] = -1;
            term[d as usize] = 1;
            match mobius(r / d) {
                1 => num = int_mul(&num, &term),
                -1 => den = int_mul(&den, &term),
                _ => {}
            }
        }
        // den divides num; both have leading coefficient 1 up to sign
        let lead = *den.last().unwrap();
        let dd = den.len() - 1;
        let mut rem = num.clone();
        let mut quot = vec![0i128; num.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k] / lead;
            quot[k - dd] = c;
            for (i, &d) in den.iter().enumerate() {
                rem[k - dd + i] -= c * d;
            }
        }
        assert!(rem.iter().all(|&c| c == 0));
        quot
    }

    #[test]
    fn matches_mobius_oracle() {
        for r in 1..=120 {
            assert_eq!(integer_cyclotomic(r).unwrap(), mobius_cyclotomic(r), "Q_{r}");
            assert_eq!(integer_cyclotomic(r).unwrap().len() as u64 - 1, totient(r));
        }
        assert_eq!(integer_cyclotomic(12).unwrap(), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn reductions() {
        let f11 = field_of_order(11).unwrap();
        assert_eq!(cyclotomic(12, &f11).unwrap().raw(), &[1, 0, 10, 0, 1]);
        let f3 = field_of_order(3).unwrap();
        assert_eq!(cyclotomic(4, &f3).unwrap().raw(), &[1, 0, 1]);
        assert_eq!(cyclotomic(28, &f3).unwrap().degree(), Some(12));
        assert!(cyclotomic(6, &f3).is_err());
        assert!(cyclotomic(0, &f3).is_err());
    }

    #[test]
    fn x4p_minus_one_factor_multiset() {
        // Q_4p · (x^2p - 1) · (x^2 + 1) and x^4p - 1 share a factor multiset.
        for q in [3u64, 7, 11] {
            let field = field_of_order(q).unwrap();
            for p in [3u64, 7, 11] {
                if q % p == 0 {
                    continue;
                }
                let n = (2 * p) as usize;
                let q4p = cyclotomic(4 * p, &field).unwrap();
                let mut lhs_c = vec![0u32; n + 1];
                lhs_c[0] = field.minus_one_raw();
                lhs_c[n] = 1;
                let x2p_minus_1 = Poly::from_raw(&field, lhs_c);
                let quad = Poly::from_ints(&field, &[1, 0, 1]);
                let lhs = &(&q4p * &x2p_minus_1) * &quad;
                let mut big = vec![0u32; 2 * n + 1];
                big[0] = field.minus_one_raw();
                big[2 * n] = 1;
                let rhs = Poly::from_raw(&field, big);
                // x^4p - 1 = (x^2p - 1)(x^2 + 1) Q_4p exactly
                assert_eq!(lhs, rhs, "q={q} p={p}");
                let fl = factorize(&lhs).unwrap();
                let fr = factorize(&rhs).unwrap();
                assert_eq!(fl.factors, fr.factors);
                // and x^2p + 1 = (x^2 + 1) Q_4p
                assert_eq!(&quad * &q4p, Poly::xn_plus_one(&field, n));
            }
        }
    }
}

//! Integer number theory: primality, factorization, multiplicative orders,
//! Euler's totient, primitive roots and good integers.
//!
//! All inputs are `u64` and must stay below `2^63`; larger values are
//! rejected instead of silently wrapping.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest accepted integer input (exclusive).
pub const INPUT_LIMIT: u64 = 1 << 63;

fn check_limit(name: &str, v: u64) -> Result<()> {
    if v >= INPUT_LIMIT {
        return invalid(format!("{name} = {v} exceeds the 2^63 input limit"));
    }
    Ok(())
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as ascending `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut rest = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// `Some((p, e))` when `q = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `base` modulo `n`.
///
/// Starts from `φ(n)` and strips prime factors while the power stays 1.
pub fn mult_order(base: u64, n: u64) -> Result<u64> {
    check_limit("n", n)?;
    check_limit("base", base)?;
    if n < 2 {
        return invalid(format!("modulus must be at least 2, got {n}"));
    }
    if gcd(base % n, n) != 1 {
        return invalid(format!("gcd({base}, {n}) != 1, order undefined"));
    }
    let b = base % n;
    let mut order = totient(n);
    for (r, _) in factorize(order) {
        while order.is_multiple_of(r) && pow_mod(b, order / r, n) == 1 {
            order /= r;
        }
    }
    Ok(order)
}

pub fn is_primitive_root(q: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    Ok(mult_order(q, p)? == p - 1)
}

/// `ord_s(base)` together with its residue mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderProfile {
    pub modulus: u64,
    pub base: u64,
    pub order: u64,
    pub order_mod4: u64,
    /// `2 ∥ order`
    pub exactly_two_divides: bool,
}

impl OrderProfile {
    pub fn new(base: u64, modulus: u64) -> Result<Self> {
        let order = mult_order(base, modulus)?;
        Ok(Self {
            modulus,
            base,
            order,
            order_mod4: order % 4,
            exactly_two_divides: order % 4 == 2,
        })
    }
}

/// Membership of `s` in the good-integer set `G(l1, l2)`, i.e. whether
/// `s | l1^k + l2^k` for some `k >= 1`, and whether some odd `k` works.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodIntegerVerdict {
    pub s: u64,
    pub l1: u64,
    pub l2: u64,
    pub is_good: bool,
    /// Least `k >= 1` with `s | l1^k + l2^k`.
    pub witness_k: Option<u64>,
    pub is_oddly_good: bool,
    pub odd_witness: Option<u64>,
    /// Largest exponent searched.
    pub k_max: u64,
    /// Verdict of the `2^β s'` order criterion when its hypotheses apply.
    pub order_criterion: Option<bool>,
}

/// Decides `s ∈ G(l1, l2)` by a direct witness search and, when
/// `s = 2^β s'` with `β >= 2` and `l1, l2, s'` pairwise coprime and odd, also
/// by the order criterion: `l1/l2 ≡ -1 (mod 2^β)` (so `ord_{2^β} = 2`),
/// `2 ∥ ord_{s'}(l1/l2)` and `(l1/l2)^{ord/2} ≡ -1 (mod s')`. For `s = 4p`
/// this is exactly `ord_4(l1/l2) = 2` and `2 ∥ ord_p(l1/l2)`.
///
/// With `k_max = None` the search covers `2·ord_s(l1/l2)` exponents: the
/// sequence `(l1/l2)^k mod s` repeats with period `ord_s`, and doubling it
/// covers both parities of `k` in every residue class.
pub fn good_integer_verdict(s: u64, l1: u64, l2: u64, k_max: Option<u64>) -> Result<GoodIntegerVerdict> {
    for (name, v) in [("s", s), ("l1", l1), ("l2", l2)] {
        check_limit(name, v)?;
    }
    if s == 0 {
        return invalid("s must be positive");
    }
    if gcd(l1, l2) != 1 {
        return invalid(format!("gcd({l1}, {l2}) != 1"));
    }
    if k_max == Some(0) {
        return invalid("k_max must be at least 1");
    }

    // A prime dividing both s and l1 (or l2) would divide the other, so such
    // s are bad; only the coprime case has a finite period to search.
    let coprime = s == 1 || gcd(s, l1) == 1 && gcd(s, l2) == 1;
    let period = if coprime && s > 1 {
        let ratio = mul_mod(l1 % s, inv_mod(l2 % s, s).expect("coprime"), s);
        mult_order(ratio, s)?
    } else {
        1
    };
    let full_search = 2 * period;
    let k_max = k_max.unwrap_or(full_search);

    let mut witness_k = None;
    let mut odd_witness = None;
    let (mut a, mut b) = (l1 % s, l2 % s);
    let (l1m, l2m) = (l1 % s, l2 % s);
    for k in 1..=k_max {
        if (a + b) % s == 0 {
            witness_k.get_or_insert(k);
            if k % 2 == 1 {
                odd_witness = Some(k);
                break;
            }
        }
        a = mul_mod(a, l1m, s);
        b = mul_mod(b, l2m, s);
    }

    let order_criterion = order_criterion(s, l1, l2)?;
    if let Some(c) = order_criterion {
        if k_max >= full_search && c != witness_k.is_some() {
            return Err(Error::Audit(format!(
                "good-integer criterion ({c}) disagrees with witness search ({:?}) for s={s}, l1={l1}, l2={l2}",
                witness_k
            )));
        }
    }

    Ok(GoodIntegerVerdict {
        s,
        l1,
        l2,
        is_good: witness_k.is_some(),
        witness_k,
        is_oddly_good: odd_witness.is_some(),
        odd_witness,
        k_max,
        order_criterion,
    })
}

fn order_criterion(s: u64, l1: u64, l2: u64) -> Result<Option<bool>> {
    let beta = s.trailing_zeros();
    let odd_part = s >> beta;
    let applies = beta >= 2
        && odd_part > 1
        && l1 % 2 == 1
        && l2 % 2 == 1
        && gcd(l1, odd_part) == 1
        && gcd(l2, odd_part) == 1;
    if !applies {
        return Ok(None);
    }
    let two_power = 1u64 << beta;
    let ratio = |m: u64| mul_mod(l1 % m, inv_mod(l2 % m, m).expect("coprime"), m);
    // Mod 2^β the ratio must be -1 itself; for β = 2 this is ord_4 = 2.
    let r_two = ratio(two_power);
    let two_ok = mult_order(r_two, two_power)? == 2 && r_two == two_power - 1;
    // Mod s' the element of order 2 reached at ord/2 must be -1 (automatic for prime s').
    let r_odd = ratio(odd_part);
    let ord_odd = mult_order(r_odd, odd_part)?;
    let odd_ok = ord_odd % 4 == 2 && pow_mod(r_odd, ord_odd / 2, odd_part) == odd_part - 1;
    let good = two_ok && odd_ok;
    if good {
        let ord_s = mult_order(ratio(s), s)?;
        if ord_s % 4 != 2 {
            return Err(Error::Audit(format!(
                "s={s} is good but ord_s(l1/l2) = {ord_s} is not exactly divisible by 2"
            )));
        }
    }
    Ok(Some(good))
}

/// Least `k >= 1` with `base^k ≡ -1 (mod s)`, if any.
///
/// `-1` lies in the cyclic group generated by `base` iff the order is even
/// and `base^{ord/2} ≡ -1`; every other solution differs from `ord/2` by a
/// multiple of the order.
pub fn minus_one_exponent(base: u64, s: u64) -> Result<Option<u64>> {
    if s <= 2 {
        return invalid(format!("modulus {s} must exceed 2"));
    }
    let ord = mult_order(base, s)?;
    Ok((ord % 2 == 0 && pow_mod(base, ord / 2, s) == s - 1).then_some(ord / 2))
}

/// Primes `p` with `lo <= p <= hi`, by per-candidate primality tests.
pub fn primes_in(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(b: u64, n: u64) -> u64 {
        let mut x = b % n;
        let mut k = 1;
        while x != 1 {
            x = x * b % n;
            k += 1;
        }
        k
    }

    #[test]
    fn orders_from_worked_examples() {
        assert_eq!(mult_order(3, 28).unwrap(), 6);
        assert_eq!(mult_order(11, 12).unwrap(), 2);
        assert_eq!(mult_order(3, 11).unwrap(), 5);
        assert_eq!(mult_order(27, 44).unwrap(), 10);
        assert_eq!(mult_order(27, 11).unwrap(), 5);
    }

    #[test]
    fn order_rejects_non_coprime() {
        assert!(mult_order(6, 9).is_err());
        assert!(mult_order(3, 1).is_err());
        assert!(mult_order(3, INPUT_LIMIT).is_err());
    }

    #[test]
    fn order_matches_power_enumeration() {
        for n in 2..=200u64 {
            for b in 1..n {
                if gcd(b, n) != 1 {
                    continue;
                }
                let ord = mult_order(b, n).unwrap();
                assert_eq!(ord, brute_order(b, n), "ord_{n}({b})");
                assert_eq!(pow_mod(b, ord, n), 1);
            }
        }
    }

    #[test]
    fn totient_values() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(28), 12);
        assert_eq!(totient(44), 20);
        for n in 1..300u64 {
            let brute = (1..=n).filter(|&m| gcd(m, n) == 1).count() as u64;
            assert_eq!(totient(n), brute);
        }
    }

    #[test]
    fn primitive_roots() {
        assert!(is_primitive_root(3, 7).unwrap());
        assert!(!is_primitive_root(3, 11).unwrap());
        assert!(is_primitive_root(7, 11).unwrap());
        assert!(is_primitive_root(3, 9).is_err());
    }

    #[test]
    fn primality_and_factoring() {
        let brute = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), brute(n), "{n}");
        }
        assert!(is_prime(4_611_686_018_427_387_847));
        let n = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factorize(n), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn order_divisibility_remark() {
        // ord_p(q) | ord_4p(q), with strict inequality at (27, 11).
        for p in [3u64, 7, 11, 19, 23] {
            for q in [3u64, 7, 11, 19, 23, 27] {
                if gcd(p, q) != 1 {
                    continue;
                }
                let small = mult_order(q, p).unwrap();
                let big = mult_order(q, 4 * p).unwrap();
                assert_eq!(big % small, 0);
            }
        }
        assert_eq!(mult_order(27, 11).unwrap(), 5);
        assert_eq!(mult_order(27, 44).unwrap(), 10);
    }

    #[test]
    fn primitive_implies_order_4p() {
        for p in primes_in(3, 400).filter(|p| p % 4 == 3) {
            for q in [3u64, 7, 11, 19, 23, 27, 31, 43] {
                if gcd(p, q) == 1 && is_primitive_root(q, p).unwrap() {
                    assert_eq!(mult_order(q, 4 * p).unwrap(), p - 1, "p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn good_integer_examples() {
        let v = good_integer_verdict(28, 3, 1, None).unwrap();
        assert!(v.is_good && v.is_oddly_good);
        assert_eq!(v.odd_witness, Some(3));

        let v = good_integer_verdict(44, 3, 1, None).unwrap();
        assert!(!v.is_oddly_good);
        assert_eq!(v.order_criterion, Some(false));

        let v = good_integer_verdict(44, 7, 1, None).unwrap();
        assert_eq!(v.odd_witness, Some(5));

        let v = good_integer_verdict(12, 11, 1, None).unwrap();
        assert_eq!(v.odd_witness, Some(1));

        assert!(!good_integer_verdict(28, 11, 1, None).unwrap().is_oddly_good);
    }

    #[test]
    fn good_integer_edge_cases() {
        assert!(good_integer_verdict(10, 4, 6, None).is_err());
        assert!(good_integer_verdict(0, 3, 1, None).is_err());
        let v = good_integer_verdict(1, 3, 1, None).unwrap();
        assert_eq!(v.witness_k, Some(1));
        // 6 shares a factor with l1, so it divides no l1^k + 1.
        let v = good_integer_verdict(6, 3, 1, None).unwrap();
        assert!(!v.is_good);
        // Even witness only: 5 | 2^2 + 1, and 2 has order 4 mod 5.
        let v = good_integer_verdict(5, 2, 1, None).unwrap();
        assert_eq!(v.witness_k, Some(2));
        assert!(v.is_good && !v.is_oddly_good);
    }

    #[test]
    fn criterion_needs_minus_one_not_just_order_two() {
        // ord_8(11) = 2 and 2 ∥ ord_3(11), yet 11^k + 1 is never 0 mod 24.
        let v = good_integer_verdict(24, 11, 1, None).unwrap();
        assert!(!v.is_good);
        assert_eq!(v.order_criterion, Some(false));
        // 19 ≡ 4 (mod 15) has order 2 without being -1.
        let v = good_integer_verdict(60, 19, 1, None).unwrap();
        assert!(!v.is_good);
        assert_eq!(v.order_criterion, Some(false));
    }

    #[test]
    fn criterion_and_search_agree_on_grid() {
        for s in 1..=500u64 {
            for q in [3u64, 7, 11, 19, 23, 27] {
                let v = good_integer_verdict(s, q, 1, None).unwrap();
                if let Some(k) = v.witness_k {
                    assert_eq!((pow_mod(q, k, s) + 1) % s, 0);
                }
                if let Some(k) = v.odd_witness {
                    assert_eq!(k % 2, 1);
                    assert!(v.is_good);
                }
            }
        }
    }

    #[test]
    fn minus_one_exponent_matches_search() {
        for s in 3..300u64 {
            for base in 2..40u64 {
                if gcd(base, s) != 1 {
                    continue;
                }
                let search = (1..=2 * s).find(|&k| pow_mod(base, k, s) == s - 1);
                assert_eq!(minus_one_exponent(base, s).unwrap(), search, "base={base} s={s}");
            }
        }
        assert!(minus_one_exponent(3, 2).is_err());
    }

}

//! Exact integer and rational helpers shared by the rest of the crate.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(int(n), int(d))
}

pub fn rat_int(n: &Integer) -> Rational {
    Rational::from_integer(n.clone())
}

/// Floor square root together with an exactness flag.
pub fn isqrt(n: &Integer) -> Result<(Integer, bool)> {
    if n.is_negative() {
        return Err(Error::Domain(format!("isqrt of negative {n}")));
    }
    let r = n.sqrt();
    let exact = &r * &r == *n;
    Ok((r, exact))
}

/// Exact square root of a perfect square, `None` for negatives and non-squares.
pub fn exact_sqrt(n: &Integer) -> Option<Integer> {
    match isqrt(n) {
        Ok((r, true)) => Some(r),
        _ => None,
    }
}

pub fn is_square(n: &Integer) -> bool {
    exact_sqrt(n).is_some()
}

/// Exact square root of a non-negative rational square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = exact_sqrt(q.numer())?;
    let d = exact_sqrt(q.denom())?;
    Some(Rational::new(n, d))
}

pub fn gcd(a: &Integer, b: &Integer) -> Integer {
    a.gcd(b)
}

pub fn lcm(a: &Integer, b: &Integer) -> Integer {
    if a.is_zero() || b.is_zero() {
        return Integer::zero();
    }
    a.lcm(b)
}

pub fn gcd_all<'a>(vals: impl IntoIterator<Item = &'a Integer>) -> Integer {
    vals.into_iter().fold(Integer::zero(), |g, v| g.gcd(v))
}

/// Prime factorization of `|n|` by trial division, primes ascending.
pub fn factorize(n: &Integer) -> Result<Vec<(Integer, u32)>> {
    if n.is_zero() {
        return Err(Error::Domain("factorization of zero".into()));
    }
    let mut out = Vec::new();
    let mut m = n.abs();
    if let Some(mut small) = m.to_u128() {
        let mut p: u128 = 2;
        while p * p <= small {
            if small % p == 0 {
                let mut e = 0;
                while small % p == 0 {
                    small /= p;
                    e += 1;
                }
                out.push((Integer::from(p), e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if small > 1 {
            out.push((Integer::from(small), 1));
        }
        return Ok(out);
    }
    let mut p = int(2);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            let mut e = 0;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += if p == int(2) { 1 } else { 2 };
    }
    if m > Integer::one() {
        out.push((m, 1));
    }
    Ok(out)
}

/// Positive divisors of `n`, ascending.
pub fn positive_divisors(n: &Integer) -> Result<Vec<Integer>> {
    let mut divs = vec![Integer::one()];
    for (p, e) in factorize(n)? {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = Integer::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// All divisors of `n` of both signs, ordered by absolute value, positive first.
pub fn signed_divisors(n: &Integer) -> Result<Vec<Integer>> {
    if n.is_zero() {
        return Err(Error::Domain("divisors of zero".into()));
    }
    Ok(positive_divisors(n)?
        .into_iter()
        .flat_map(|d| [d.clone(), -d])
        .collect())
}

/// Writes `n = s·d²` with `s` square-free, `d > 0` and `sign(s) = sign(n)`.
pub fn squarefree_decompose(n: &Integer) -> Result<(Integer, Integer)> {
    if n.is_zero() {
        return Err(Error::Domain("square-free part of zero".into()));
    }
    let mut s = if n.is_negative() { -Integer::one() } else { Integer::one() };
    let mut d = Integer::one();
    for (p, e) in factorize(n)? {
        if e % 2 == 1 {
            s *= &p;
        }
        for _ in 0..e / 2 {
            d *= &p;
        }
    }
    Ok((s, d))
}

pub fn is_squarefree(n: &Integer) -> bool {
    match factorize(n) {
        Ok(f) => f.iter().all(|(_, e)| *e == 1),
        Err(_) => false,
    }
}

/// p-adic valuation of a non-zero integer.
pub fn valuation(n: &Integer, p: &Integer) -> u32 {
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: &Integer, p: &Integer) -> i32 {
    let r = a.mod_floor(p);
    if r.is_zero() {
        return 0;
    }
    let e = (p - 1u32) / 2u32;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Lowest common multiple of the denominators of a set of rationals.
pub fn denominator_lcm<'a>(vals: impl IntoIterator<Item = &'a Rational>) -> Integer {
    vals.into_iter()
        .fold(Integer::one(), |acc, q| lcm(&acc, q.denom()))
}

/// `a / b` when `b` divides `a` exactly.
pub fn exact_div(a: &Integer, b: &Integer) -> Option<Integer> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(b);
    r.is_zero().then_some(q)
}

/// Parses `"n"` or `"n/d"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("cannot parse `{s}` as a rational"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().map_err(|_| bad())?;
            let d: Integer = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&int(169)).unwrap(), (int(13), true));
        assert_eq!(isqrt(&int(2)).unwrap(), (int(1), false));
        assert_eq!(isqrt(&int(0)).unwrap(), (int(0), true));
        assert!(matches!(isqrt(&int(-1)), Err(Error::Domain(_))));
    }

    #[test]
    fn signed_divisor_examples() {
        assert_eq!(signed_divisors(&int(4)).unwrap(), ints(&[1, -1, 2, -2, 4, -4]));
        assert_eq!(signed_divisors(&int(1)).unwrap(), ints(&[1, -1]));
        assert_eq!(
            signed_divisors(&int(-6)).unwrap(),
            ints(&[1, -1, 2, -2, 3, -3, 6, -6])
        );
        assert!(signed_divisors(&int(0)).is_err());
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_decompose(&int(12)).unwrap(), (int(3), int(2)));
        assert_eq!(squarefree_decompose(&int(4)).unwrap(), (int(1), int(2)));
        assert_eq!(squarefree_decompose(&int(-4)).unwrap(), (int(-1), int(2)));
        assert!(squarefree_decompose(&int(0)).is_err());
    }

    #[test]
    fn legendre_small() {
        assert_eq!(legendre(&int(-1), &int(5)), 1);
        assert_eq!(legendre(&int(-1), &int(3)), -1);
        assert_eq!(legendre(&int(6), &int(3)), 0);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn isqrt_brackets(n in 0i64..i64::MAX) {
                let n = int(n);
                let (r, exact) = isqrt(&n).unwrap();
                prop_assert!(&r * &r <= n);
                let r1 = &r + 1;
                prop_assert!(&r1 * &r1 > n);
                prop_assert_eq!(exact, &r * &r == n);
            }

            #[test]
            fn divisors_match_trial_division(n in -1_000_000i64..1_000_000i64) {
                prop_assume!(n != 0);
                let got = signed_divisors(&int(n)).unwrap();
                let mut want: Vec<i64> = (1..=n.abs()).filter(|d| n % d == 0).collect();
                want.sort();
                let want: Vec<Integer> = want.into_iter().flat_map(|d| [int(d), int(-d)]).collect();
                prop_assert_eq!(got, want);
            }

            #[test]
            fn squarefree_reconstructs(n in -1_000_000i64..1_000_000i64) {
                prop_assume!(n != 0);
                let (s, d) = squarefree_decompose(&int(n)).unwrap();
                prop_assert_eq!(&s * &d * &d, int(n));
                prop_assert!(d > Integer::zero());
                let sa = s.abs().to_i64().unwrap();
                let mut k = 2i64;
                while k * k <= sa {
                    prop_assert!(sa % (k * k) != 0);
                    k += 1;
                }
            }
        }
    }
}

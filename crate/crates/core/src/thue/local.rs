//! p-adic obstructions for `F(m, n) = d` with coprime `m, n`.
//!
//! A pair with `p ∤ gcd(m, n)` scales by a unit to `(t, 1)` or `(1, p·s)`,
//! and `F(λm, λn) = λ⁴·F(m, n)`, so solvability over `Z_p` means some `t`
//! with `f(t) ∈ d·(Z_p^×)⁴` for `f(t) = F(t, 1)` or `f(s) = F(1, p·s)`. That
//! depends only on `f(t)` modulo `p^(v+r)`, `v = v_p(d)`, where `r = 4` for
//! `p = 2` and `r = 1` otherwise.

use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ThueEquation;
use crate::arith::{valuation, Integer};

/// Primes always tried, besides the small prime factors of the right-hand side.
const BASE_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
/// Largest prime factor of the right-hand side that is tried.
const RHS_PRIME_LIMIT: u64 = 100;
const MODULUS_CAP: i128 = 1 << 60;

/// A modulus certifying that `F(m, n) = d` has no coprime solution: the
/// content of `F` when it does not divide `d`, else a prime power.
pub fn local_obstruction(eq: &ThueEquation) -> Option<Integer> {
    if eq.rhs.is_zero() {
        return None;
    }
    let content = eq.form.content();
    if !eq.rhs.is_multiple_of(&content) {
        return Some(content);
    }
    let coeffs = eq.form.coeffs.each_ref().map(|c| c / &content);
    let rhs = &eq.rhs / &content;
    let mut primes: Vec<u64> = BASE_PRIMES.to_vec();
    let mut r = rhs.abs();
    for p in 2..=RHS_PRIME_LIMIT {
        let pi = Integer::from(p);
        if r.is_multiple_of(&pi) {
            if !primes.contains(&p) {
                primes.push(p);
            }
            while r.is_multiple_of(&pi) {
                r /= p;
            }
        }
    }
    primes.into_iter().find(|&p| !solvable_p_adically(&coeffs, &rhs, p)).map(|p| {
        let pi = Integer::from(p);
        pi.pow(valuation(&rhs, &pi) + if p == 2 { 4 } else { 1 })
    })
}

/// Whether `F(m, n) = d ≠ 0` has a solution in `Z_p` with `p ∤ gcd(m, n)`.
/// Reports `true` when the modulus grows too large.
pub fn solvable_p_adically(coeffs: &[Integer; 5], d: &Integer, p: u64) -> bool {
    let pi = Integer::from(p);
    let v = valuation(d, &pi);
    let r = if p == 2 { 4 } else { 1 };
    let Some(modulus) = pi.pow(v + r).to_i128().filter(|m| *m <= MODULUS_CAP) else {
        return true;
    };
    let red = |x: &Integer| x.mod_floor(&Integer::from(modulus)).to_i128().expect("reduced");
    let p = p as i128;
    let pr = p.pow(r);
    // unit part of d modulo p^r, and the fourth powers of units
    let du = (d / pi.pow(v)).mod_floor(&Integer::from(pr)).to_i128().expect("small");
    let fourth: Vec<i128> = (1..pr).filter(|u| u % p != 0).map(|u| u * u % pr * u % pr * u % pr).collect();
    let accepts = |u: i128| fourth.iter().any(|w| w * du % pr == u);

    let chart_a: Vec<i128> = coeffs.iter().rev().map(red).collect();
    let chart_b: Vec<i128> = (0..5).map(|i| red(&(&coeffs[i] * pi.pow(i as u32)))).collect();
    [chart_a, chart_b].iter().any(|f| search(f, p, v as i64, r, &accepts))
}

/// Whether some `t ∈ Z_p` has `v_p(f(t)) = w` and `accepts` on the unit part
/// of `f(t)` modulo `p^r`, for `f` known modulo `p^(w+r)`, lowest degree
/// first. Substituting `t = t₀ + p·s` and removing the content keeps the
/// precision equal to `w + r`; only roots of `f mod p` are refined.
fn search(f: &[i128], p: i128, w: i64, r: u32, accepts: &impl Fn(i128) -> bool) -> bool {
    let prec = w + r as i64;
    if w < 0 || prec <= 0 {
        return false;
    }
    let md = p.pow(prec as u32);
    let c = f.iter().map(|&a| valuation_i128(a, p, prec as u32)).min().unwrap_or(prec as u32) as i64;
    if c >= prec {
        // f vanishes modulo p^(w+r), so v_p(f(t)) > w throughout
        return false;
    }
    if c > 0 {
        let pc = p.pow(c as u32);
        let g: Vec<i128> = f.iter().map(|a| a.rem_euclid(md) / pc).collect();
        return search(&g, p, w - c, r, accepts);
    }
    let eval = |t: i128, m: i128| f.iter().rev().fold(0i128, |acc, a| (acc * t + a).rem_euclid(m));
    let pr = p.pow(r);
    for t0 in 0..p {
        if eval(t0, p) != 0 {
            if w == 0 && (0..pr / p).any(|j| accepts(eval(t0 + p * j, pr))) {
                return true;
            }
        } else if search(&shift(f, t0, p, md), p, w, r, accepts) {
            return true;
        }
    }
    false
}

/// Coefficients of `f(t₀ + p·s)` modulo `md`.
fn shift(f: &[i128], t0: i128, p: i128, md: i128) -> Vec<i128> {
    // Horner on polynomials: acc ← acc·(t₀ + p·s) + a
    let mut acc: Vec<i128> = vec![0; f.len()];
    for a in f.iter().rev() {
        let mut next = vec![0i128; f.len()];
        for (i, c) in acc.iter().enumerate() {
            next[i] = (next[i] + c * t0).rem_euclid(md);
            if i + 1 < next.len() {
                next[i + 1] = (next[i + 1] + c * p).rem_euclid(md);
            }
        }
        next[0] = (next[0] + a).rem_euclid(md);
        acc = next;
    }
    acc
}

fn valuation_i128(a: i128, p: i128, cap: u32) -> u32 {
    let mut a = a;
    let mut v = 0;
    while v < cap && a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

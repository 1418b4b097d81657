//! Exhaustive search of `F(m, n) = d` over the box `|m|, |n| ≤ bound`.
//!
//! For fixed `n > 0` the polynomial `g(m) = F(m, n) - d` has its critical
//! points at `n·c`, where `c` runs over the real critical points of
//! `F(t, 1)`. Those are isolated once per equation at a fine dyadic scale,
//! so each column costs a handful of evaluations near the critical points
//! plus one short bisection per monotone stretch that changes sign, seeded
//! by the sign change found in the previous column.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{canonical_pair, solve_reducible, Classification, Provenance, QuarticForm, SolutionSet, ThueEquation};
use crate::arith::Integer;
use crate::error::Result;
use crate::roots::{eval, integer_roots_in, partition_point, root_windows, Scalar};

/// Windows wider than this are scanned by monotone-piece isolation rather
/// than point by point.
const DENSE_WINDOW: i64 = 64;

/// Coprime solutions in the box, canonical.
pub fn search_box(form: &QuarticForm, rhs: &Integer, bound: u64) -> BTreeSet<(Integer, Integer)> {
    let mut out = BTreeSet::new();
    if bound == 0 {
        return out;
    }
    if form.coeffs[0] == *rhs {
        out.insert((Integer::one(), Integer::zero()));
    }
    let b = Integer::from(bound);
    let derivative: Vec<Integer> = form
        .dehomogenized()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Integer::from(i as u64))
        .collect();
    let constant_in_m = derivative.iter().all(Zero::is_zero);

    let mut scale_bits = 20u32;
    while (Integer::one() << scale_bits) < &b * 64u32 {
        scale_bits += 1;
    }
    let scale = Integer::one() << scale_bits;
    let windows: Vec<(Integer, Integer)> = if constant_in_m {
        Vec::new()
    } else {
        // S³·f'(s/S), lowest degree first
        let deg = derivative.len() - 1;
        let scaled: Vec<Integer> = derivative
            .iter()
            .enumerate()
            .map(|(i, c)| c * scale.pow((deg - i) as u32))
            .collect();
        root_windows(&scaled)
    };

    let magnitude: Integer = form.coeffs.iter().map(|c| c.abs()).sum::<Integer>() * b.pow(4) * 2u32 + rhs.abs();
    let window_max = windows
        .iter()
        .flat_map(|(u, v)| [u.abs(), v.abs()])
        .max()
        .unwrap_or_else(Integer::zero);
    let fits = magnitude.bits() < 125 && (window_max * &b).bits() < 125;
    let found: Vec<(Integer, Integer)> = if fits {
        let to = |x: &Integer| x.to_i128().expect("checked magnitude");
        let coeffs = form.coeffs.each_ref().map(to);
        let wins: Vec<(i128, i128)> = windows.iter().map(|(u, v)| (to(u), to(v))).collect();
        scan(&coeffs, to(rhs), &wins, to(&scale), bound as i128, constant_in_m)
            .into_iter()
            .map(|(m, n)| (Integer::from(m), Integer::from(n)))
            .collect()
    } else {
        scan(&form.coeffs, rhs.clone(), &windows, scale, b.clone(), constant_in_m)
    };
    out.extend(found.into_iter().map(|(m, n)| canonical_pair(m, n)));
    out
}

fn scan<T: Scalar>(
    coeffs: &[T; 5],
    rhs: T,
    windows: &[(T, T)],
    scale: T,
    bound: T,
    constant_in_m: bool,
) -> Vec<(T, T)> {
    let one = T::one();
    let lo_all = -bound.clone();
    let mut found = Vec::new();
    let mut n = one.clone();
    let mut g: Vec<T> = vec![T::zero(); 5];
    let mut cands: Vec<T> = Vec::new();
    let mut prev: Vec<T> = Vec::new();
    let mut next: Vec<T> = Vec::new();
    while n <= bound {
        let n2 = n.clone() * n.clone();
        let n3 = n2.clone() * n.clone();
        g[0] = coeffs[4].clone() * n3.clone() * n.clone() - rhs.clone();
        g[1] = coeffs[3].clone() * n3;
        g[2] = coeffs[2].clone() * n2;
        g[3] = coeffs[1].clone() * n.clone();
        g[4] = coeffs[0].clone();
        cands.clear();
        if constant_in_m {
            if g[0].is_zero() {
                let mut m = lo_all.clone();
                while m <= bound {
                    cands.push(m.clone());
                    m = m + one.clone();
                }
            }
        } else {
            // a sign change at t in column n - 1 sits near t·n/(n - 1)
            let hints: Vec<T> = if n > one {
                let pn = n.clone() - one.clone();
                prev.iter().map(|t| (t.clone() * n.clone()).div_floor(&pn)).collect()
            } else {
                Vec::new()
            };
            next.clear();
            column(&g, &n, windows, &scale, &bound, &hints, &mut next, &mut cands);
            std::mem::swap(&mut prev, &mut next);
        }
        cands.sort();
        cands.dedup();
        for m in cands.drain(..) {
            if m.gcd(&n).is_one() {
                found.push((m, n.clone()));
            }
        }
        n = n + one.clone();
    }
    found
}

/// Integer roots of `g` in `[-bound, bound]` for one column. Sign changes
/// on monotone stretches are recorded in `changes`.
#[allow(clippy::too_many_arguments)]
fn column<T: Scalar>(
    g: &[T],
    n: &T,
    windows: &[(T, T)],
    scale: &T,
    bound: &T,
    hints: &[T],
    changes: &mut Vec<T>,
    out: &mut Vec<T>,
) {
    let lo_all = -bound.clone();
    let mut cursor = lo_all.clone();
    for (u, v) in windows {
        let a = (n.clone() * u.clone()).div_floor(scale);
        let b = -((-(n.clone() * v.clone())).div_floor(scale));
        let a = a.max(lo_all.clone());
        let b = b.min(bound.clone());
        if a > b {
            continue;
        }
        if cursor < a {
            out.extend(monotone_root(g, &cursor, &a, hints, changes));
        }
        if a.clone() + T::from(DENSE_WINDOW) >= b {
            let mut m = a.clone();
            while m <= b {
                if eval(g, &m).is_zero() {
                    out.push(m.clone());
                }
                m = m + T::one();
            }
        } else {
            out.extend(integer_roots_in(g, &a, &b));
        }
        if b > cursor {
            cursor = b;
        }
    }
    if cursor <= *bound {
        out.extend(monotone_root(g, &cursor, bound, hints, changes));
    }
}

/// The integer root of `g` on `[a, b]`, where `g` is monotone. Hints within
/// two of the sign change skip the full bisection.
fn monotone_root<T: Scalar>(g: &[T], a: &T, b: &T, hints: &[T], changes: &mut Vec<T>) -> Option<T> {
    let ga = eval(g, a);
    if ga.is_zero() {
        return Some(a.clone());
    }
    let gb = eval(g, b);
    if gb.is_zero() {
        return Some(b.clone());
    }
    if ga.signum() == gb.signum() {
        return None;
    }
    let increasing = ga < gb;
    let flipped = |x: &T| {
        let v = eval(g, x);
        if increasing {
            !v.is_negative()
        } else {
            !v.is_positive()
        }
    };
    let two = T::from(2);
    let t = hints
        .iter()
        .filter(|h| *h >= a && *h <= b)
        .find_map(|h| {
            let lo = (h.clone() - two.clone()).max(a.clone());
            let hi = (h.clone() + two.clone()).min(b.clone());
            (!flipped(&lo) && flipped(&hi)).then(|| partition_point(&lo, &hi, flipped))
        })
        .unwrap_or_else(|| partition_point(a, b, flipped));
    changes.push(t.clone());
    eval(g, &t).is_zero().then_some(t)
}

/// Box search for irreducible equations; reducible ones go through factor
/// casework, which may be exact.
pub fn solve_bounded(eq: &ThueEquation, bound: u64) -> Result<SolutionSet> {
    if let Classification::Reducible(_) = eq.classification {
        return solve_reducible(eq, bound);
    }
    let pairs = search_box(&eq.form, &eq.rhs, bound);
    SolutionSet::verified(eq, pairs, Provenance::BoundedBy(Integer::from(bound)))
}

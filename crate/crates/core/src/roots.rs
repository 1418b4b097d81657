//! Exact integer root isolation for univariate integer polynomials.
//!
//! Coefficients are stored lowest degree first. A polynomial is split into
//! integer ranges on which it is monotone over the reals (recursively, from
//! the sign pattern of its derivative); each such range holds at most one
//! root, located by bisection. Everything is generic over the scalar so the
//! hot Thue loop can run on `i128` and fall back to `BigInt`.

use std::fmt::Debug;

use num_integer::Integer as IntegerOps;
use num_traits::Signed;

pub trait Scalar: Clone + Ord + Debug + Signed + IntegerOps + From<i64> {}
impl<T: Clone + Ord + Debug + Signed + IntegerOps + From<i64>> Scalar for T {}

pub fn eval<T: Scalar>(p: &[T], x: &T) -> T {
    let mut acc = T::zero();
    for c in p.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

/// Drops trailing zero coefficients.
pub fn trim<T: Scalar>(mut p: Vec<T>) -> Vec<T> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn derivative<T: Scalar>(p: &[T]) -> Vec<T> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * T::from(i as i64))
        .collect()
}

/// First `x` in `[lo, hi]` with `pred(x)`, or `hi + 1`; `pred` must be
/// monotone false → true on the range.
pub fn partition_point<T: Scalar>(lo: &T, hi: &T, pred: impl Fn(&T) -> bool) -> T {
    let one = T::one();
    let (mut l, mut h) = (lo.clone(), hi.clone() + one.clone());
    while l < h {
        let mid = (l.clone() + h.clone()).div_floor(&T::from(2));
        if pred(&mid) {
            h = mid;
        } else {
            l = mid + one.clone();
        }
    }
    l
}

/// Splits `[lo, hi]` into consecutive integer ranges on each of which `p`
/// is monotone over the reals. `p` must already be trimmed.
pub fn monotone_pieces<T: Scalar>(p: &[T], lo: &T, hi: &T) -> Vec<(T, T)> {
    if lo > hi {
        return Vec::new();
    }
    if p.len() <= 2 {
        return vec![(lo.clone(), hi.clone())];
    }
    let d = derivative(p);
    let mut out = Vec::new();
    for (a, b) in monotone_pieces(&d, lo, hi) {
        let increasing = eval(&d, &a) <= eval(&d, &b);
        let t = partition_point(&a, &b, |x| {
            let v = eval(&d, x);
            if increasing {
                v.is_positive()
            } else {
                v.is_negative()
            }
        });
        if t > a {
            out.push((a, t.clone() - T::one()));
        }
        if t <= b {
            out.push((t, b));
        }
    }
    out
}

/// The unique root of `p` in `[a, b]` given that `p` is monotone there.
pub fn root_in_monotone<T: Scalar>(p: &[T], a: &T, b: &T) -> Option<T> {
    let pa = eval(p, a);
    if pa.is_zero() {
        return Some(a.clone());
    }
    let pb = eval(p, b);
    if pb.is_zero() {
        return Some(b.clone());
    }
    if pa.signum() == pb.signum() {
        return None;
    }
    let increasing = pa < pb;
    let t = partition_point(a, b, |x| {
        let v = eval(p, x);
        if increasing {
            !v.is_negative()
        } else {
            !v.is_positive()
        }
    });
    (t <= *b && eval(p, &t).is_zero()).then_some(t)
}

/// Integer roots of a non-zero polynomial inside `[lo, hi]`, ascending.
pub fn integer_roots_in<T: Scalar>(p: &[T], lo: &T, hi: &T) -> Vec<T> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut roots: Vec<T> = monotone_pieces(&p, lo, hi)
        .into_iter()
        .filter_map(|(a, b)| root_in_monotone(&p, &a, &b))
        .collect();
    roots.dedup();
    roots
}

/// Bound on the absolute value of every real root (Cauchy).
pub fn root_bound<T: Scalar>(p: &[T]) -> T {
    let p = trim(p.to_vec());
    let lead = match p.last() {
        Some(l) => l.abs(),
        None => return T::zero(),
    };
    let max = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(T::zero);
    T::one() + max.div_ceil(&lead)
}

/// All integer roots of a non-zero polynomial.
pub fn integer_roots<T: Scalar>(p: &[T]) -> Vec<T> {
    let r = root_bound(p);
    integer_roots_in(p, &-r.clone(), &r)
}

/// Merged, ascending integer intervals covering every real point where `p`
/// changes sign, plus every integer root.
pub fn root_windows<T: Scalar>(p: &[T]) -> Vec<(T, T)> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let r = root_bound(&p);
    let pieces = monotone_pieces(&p, &-r.clone(), &r);
    let mut windows: Vec<(T, T)> = Vec::new();
    for (i, (a, b)) in pieces.iter().enumerate() {
        let pa = eval(&p, a);
        let pb = eval(&p, b);
        if pa.is_zero() {
            windows.push((a.clone(), a.clone()));
        }
        if pb.is_zero() {
            windows.push((b.clone(), b.clone()));
        }
        if !pa.is_zero() && !pb.is_zero() && pa.signum() != pb.signum() {
            let increasing = pa < pb;
            let t = partition_point(a, b, |x| {
                let v = eval(&p, x);
                if increasing {
                    v.is_positive()
                } else {
                    v.is_negative()
                }
            });
            windows.push((t.clone() - T::one(), t));
        }
        if let Some((next, _)) = pieces.get(i + 1) {
            windows.push((b.clone(), next.clone()));
        }
    }
    windows.sort();
    let mut merged: Vec<(T, T)> = Vec::new();
    for (u, v) in windows {
        match merged.last_mut() {
            Some((_, pv)) if u <= *pv => {
                if v > *pv {
                    *pv = v;
                }
            }
            _ => merged.push((u, v)),
        }
    }
    merged
}

//! Pell–Fermat equations `x² - D·y² = N` with `D > 0` not a square.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::arith::{exact_sqrt, is_square, isqrt, Integer};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellFermat {
    pub d: Integer,
    pub n: Integer,
}

impl PellFermat {
    pub fn new(d: Integer, n: Integer) -> Result<Self> {
        if !d.is_positive() || is_square(&d) {
            return Err(Error::Domain(format!("Pell coefficient {d} must be a positive non-square")));
        }
        if n.is_zero() {
            return Err(Error::Domain("Pell right-hand side must be non-zero".into()));
        }
        Ok(PellFermat { d, n })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellClasses {
    pub d: Integer,
    pub n: Integer,
    pub fundamental: (Integer, Integer),
    /// One solution per class and sign pattern, `y ≥ 0`.
    pub representatives: Vec<(Integer, Integer)>,
    pub infinite: bool,
}

/// Minimal `(u, v)` with `u² - D·v² = 1`, from the continued fraction of √D.
pub fn fundamental_unit(d: &Integer) -> Result<(Integer, Integer)> {
    if !d.is_positive() || is_square(d) {
        return Err(Error::Domain(format!("{d} is not a positive non-square")));
    }
    let (a0, _) = isqrt(d)?;
    let (mut m, mut den, mut a) = (Integer::zero(), Integer::one(), a0.clone());
    let (mut p_prev, mut p) = (Integer::one(), a0.clone());
    let (mut q_prev, mut q) = (Integer::zero(), Integer::one());
    loop {
        if &p * &p - d * &q * &q == Integer::one() {
            return Ok((p, q));
        }
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

/// Class representatives by the bounds of Nagell: every class contains a
/// solution with `0 ≤ y ≤ v·√(N / (2(u+1)))` when `N > 0`, or
/// `0 < y ≤ v·√(|N| / (2(u-1)))` when `N < 0`.
pub fn solve_classes(pf: &PellFermat) -> Result<PellClasses> {
    let (u, v) = fundamental_unit(&pf.d)?;
    let n = &pf.n;
    let denom = if n.is_positive() { (&u + 1u32) * 2u32 } else { (&u - 1u32) * 2u32 };
    let ymax = isqrt(&(&v * &v * n.abs() / denom))?.0;
    let mut reps = BTreeSet::new();
    let mut y = Integer::zero();
    while y <= ymax {
        if let Some(x) = exact_sqrt(&(n + &pf.d * &y * &y)) {
            reps.insert((x.clone(), y.clone()));
            reps.insert((-x, y.clone()));
        }
        y += 1u32;
    }
    let representatives: Vec<_> = reps.into_iter().collect();
    Ok(PellClasses {
        d: pf.d.clone(),
        n: pf.n.clone(),
        infinite: !representatives.is_empty(),
        fundamental: (u, v),
        representatives,
    })
}

impl PellClasses {
    fn step(&self, x: &Integer, y: &Integer, forward: bool) -> (Integer, Integer) {
        let (u, v) = &self.fundamental;
        if forward {
            (u * x + &self.d * v * y, v * x + u * y)
        } else {
            (u * x - &self.d * v * y, u * y - v * x)
        }
    }
}

/// All solutions with `|x| ≤ limit`, sorted, under the automorphism
/// `(x, y) ↦ (u·x + D·v·y, v·x + u·y)` and sign changes.
pub fn enumerate(pc: &PellClasses, limit: &Integer) -> Vec<(Integer, Integer)> {
    let mut out = BTreeSet::new();
    for (x0, y0) in &pc.representatives {
        for forward in [true, false] {
            let (mut x, mut y) = (x0.clone(), y0.clone());
            let mut prev = x.abs();
            let mut rising = 0;
            // |x| is unimodal along an orbit; stop once it has grown past the limit
            while rising < 2 || x.abs() <= *limit {
                if x.abs() <= *limit {
                    for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        out.insert((&x * sx, &y * sy));
                    }
                }
                let next = pc.step(&x, &y, forward);
                x = next.0;
                y = next.1;
                let cur = x.abs();
                if cur > prev && cur > *limit {
                    rising += 1;
                }
                prev = cur;
            }
        }
    }
    out.into_iter().collect()
}

pub fn satisfies(d: &Integer, n: &Integer, x: &Integer, y: &Integer) -> bool {
    x * x - d * y * y == *n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn classes(d: i64, n: i64) -> PellClasses {
        solve_classes(&PellFermat::new(int(d), int(n)).unwrap()).unwrap()
    }

    #[test]
    fn fundamental_units() {
        assert_eq!(fundamental_unit(&int(2)).unwrap(), (int(3), int(2)));
        assert_eq!(fundamental_unit(&int(5)).unwrap(), (int(9), int(4)));
        assert_eq!(fundamental_unit(&int(13)).unwrap(), (int(649), int(180)));
        assert_eq!(fundamental_unit(&int(61)).unwrap(), (int(1766319049), int(226153980)));
        assert!(fundamental_unit(&int(4)).is_err());
        assert!(fundamental_unit(&int(-3)).is_err());
    }

    #[test]
    fn fundamental_unit_is_minimal() {
        for d in 2i64..=100 {
            if is_square(&int(d)) {
                continue;
            }
            let (u, v) = fundamental_unit(&int(d)).unwrap();
            assert_eq!(&u * &u - int(d) * &v * &v, int(1));
            let v: i64 = v.try_into().unwrap_or(i64::MAX);
            for w in 1..v.min(10_000) {
                assert!(!is_square(&(int(d) * int(w) * int(w) + 1)), "D={d} w={w}");
            }
        }
    }

    #[test]
    fn class_examples() {
        let c = classes(5, -4);
        assert!(c.infinite);
        assert!(c.representatives.contains(&(int(1), int(1))));
        let c = classes(2, -1);
        assert!(c.infinite);
        assert!(c.representatives.contains(&(int(1), int(1))));
        let c = classes(3, -1);
        assert!(!c.infinite);
        assert!(c.representatives.is_empty());
    }

    #[test]
    fn enumerate_examples() {
        let xs = |d, n, l| -> BTreeSet<Integer> {
            enumerate(&classes(d, n), &int(l))
                .into_iter()
                .map(|(x, _)| x)
                .filter(|x| x.is_positive())
                .collect()
        };
        assert_eq!(xs(5, -4, 50), [1, 4, 11, 29].map(int).into_iter().collect());
        assert_eq!(xs(2, -1, 300), [1, 7, 41, 239].map(int).into_iter().collect());
        assert!(enumerate(&classes(3, -1), &int(1000)).is_empty());
    }

    #[test]
    fn enumerate_matches_brute_force_box() {
        let l = 500i64;
        for d in [2i64, 3, 5, 6, 7, 8, 10, 13, 20] {
            for n in [-7i64, -4, -2, -1, 1, 2, 3, 4, 8, 9, 11] {
                let got: BTreeSet<_> = enumerate(&classes(d, n), &int(l))
                    .into_iter()
                    .filter(|(_, y)| y.abs() <= int(l))
                    .collect();
                let mut want = BTreeSet::new();
                for y in -l..=l {
                    if let Some(x) = exact_sqrt(&int(n + d * y * y)) {
                        if x <= int(l) {
                            want.insert((x.clone(), int(y)));
                            want.insert((-x, int(y)));
                        }
                    }
                }
                assert_eq!(got, want, "D={d} N={n}");
            }
        }
    }

    #[test]
    fn automorphism_closure() {
        for (d, n) in [(5, -4), (2, -1), (8, 4), (13, 3)] {
            let c = classes(d, n);
            for (x0, y0) in &c.representatives {
                let (mut x, mut y) = (x0.clone(), y0.clone());
                for _ in 0..10 {
                    assert!(satisfies(&c.d, &c.n, &x, &y));
                    let next = c.step(&x, &y, true);
                    x = next.0;
                    y = next.1;
                }
            }
        }
    }
}

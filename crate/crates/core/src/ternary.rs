//! Diagonal ternary quadratic equations `A·x² + B·y² + C·z² = 0`.

use std::fmt;

use num_integer::{Integer as _, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{exact_div, exact_sqrt, factorize, gcd_all, int, lcm, legendre, valuation, Integer};
use crate::error::{Error, Result};
use crate::forms::BinaryForm;

pub const DEFAULT_HEIGHT_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: &Integer| if v.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{}x^2 {} {}y^2 {} {}z^2 = 0",
            self.a,
            sign(&self.b),
            self.b.abs(),
            sign(&self.c),
            self.c.abs()
        )
    }
}

impl TernaryForm {
    pub fn new(a: Integer, b: Integer, c: Integer) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::Domain(format!("ternary coefficients must be non-zero: ({a}, {b}, {c})")));
        }
        Ok(TernaryForm { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        TernaryForm::new(int(a), int(b), int(c))
    }

    pub fn evaluate(&self, x: &Integer, y: &Integer, z: &Integer) -> Integer {
        &self.a * x * x + &self.b * y * y + &self.c * z * z
    }

    /// Divides out the common content and makes `A` positive.
    pub fn normalized(&self) -> TernaryForm {
        let g = gcd_all([&self.a, &self.b, &self.c]);
        let g = if self.a.is_negative() { -g } else { g };
        TernaryForm {
            a: &self.a / &g,
            b: &self.b / &g,
            c: &self.c / &g,
        }
    }

    /// Checks the real place and every prime dividing `2ABC`. For diagonal
    /// conics local solvability everywhere is equivalent to a rational point,
    /// so `false` proves there is none.
    pub fn locally_solvable(&self) -> bool {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        if a.signum() == b.signum() && b.signum() == c.signum() {
            return false;
        }
        let u = -(a * c);
        let v = -(b * c);
        let primes = match factorize(&(int(2) * a * b * c)) {
            Ok(f) => f,
            Err(_) => return false,
        };
        primes.iter().all(|(p, _)| hilbert_symbol(&u, &v, p) == 1)
    }
}

/// Hilbert symbol `(u, v)_p` for non-zero integers and a finite prime `p`.
pub fn hilbert_symbol(u: &Integer, v: &Integer, p: &Integer) -> i32 {
    let alpha = valuation(u, p);
    let beta = valuation(v, p);
    let mut uu = u.clone();
    let mut vv = v.clone();
    for _ in 0..alpha {
        uu /= p;
    }
    for _ in 0..beta {
        vv /= p;
    }
    if *p == int(2) {
        let m8 = |x: &Integer| x.mod_floor(&int(8)).to_u32().unwrap_or(0);
        let eps = |x: u32| ((x - 1) / 2) % 2;
        let omega = |x: u32| ((x * x - 1) / 8) % 2;
        let (ur, vr) = (m8(&uu), m8(&vv));
        let e = eps(ur) * eps(vr) + alpha * omega(vr) + beta * omega(ur);
        if e.is_multiple_of(2) {
            1
        } else {
            -1
        }
    } else {
        let eps_p = ((p - 1u32) / 2u32).is_odd();
        let mut s = if (alpha * beta) % 2 == 1 && eps_p { -1 } else { 1 };
        if beta % 2 == 1 {
            s *= legendre(&uu, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(&vv, p);
        }
        s
    }
}

/// Finds a primitive solution with `z ≠ 0` by increasing height, where the
/// height of a candidate is `max(|x|, |z|)` and `y` is solved for. Among the
/// candidates of minimal height the smallest `(z, x)` is returned, all
/// coordinates non-negative.
pub fn particular_solution(t: &TernaryForm, height_bound: u64) -> Result<[Integer; 3]> {
    if !t.locally_solvable() {
        return Err(Error::Contract(format!("{t} has no non-trivial rational solution")));
    }
    let found = match (t.a.to_i128(), t.b.to_i128(), t.c.to_i128()) {
        (Some(a), Some(b), Some(c))
            if a.unsigned_abs().max(b.unsigned_abs()).max(c.unsigned_abs()) < (1u128 << 60)
                && height_bound < (1 << 30) =>
        {
            search_small(a, b, c, height_bound as i128)
                .map(|s| s.map(Integer::from))
        }
        _ => search_big(t, height_bound),
    };
    match found {
        Some(mut s) => {
            let g = gcd_all(s.iter());
            for v in s.iter_mut() {
                *v /= &g;
            }
            Ok(s)
        }
        None => {
            let form = t.to_string();
            let bound = Integer::from(height_bound);
            // z = 0 points exist iff -A/B is a rational square
            if exact_sqrt(&(-&t.a * &t.b)).is_some() {
                Err(Error::DegenerateZ { form, bound })
            } else {
                Err(Error::TernaryNotFound { form, bound })
            }
        }
    }
}

fn height_order(h: i128) -> impl Iterator<Item = (i128, i128)> {
    (1..h).map(move |z| (h, z)).chain((0..=h).map(move |x| (x, h)))
}

fn search_small(a: i128, b: i128, c: i128, bound: i128) -> Option<[i128; 3]> {
    for h in 1..=bound {
        for (x, z) in height_order(h) {
            let num = -(a * x * x + c * z * z);
            if num % b != 0 {
                continue;
            }
            let q = num / b;
            if q < 0 {
                continue;
            }
            let r = (q as u128).sqrt() as i128;
            if r * r == q {
                return Some([x, r, z]);
            }
        }
    }
    None
}

fn search_big(t: &TernaryForm, bound: u64) -> Option<[Integer; 3]> {
    for h in 1..=bound as i128 {
        for (x, z) in height_order(h) {
            let (x, z) = (Integer::from(x), Integer::from(z));
            let num = -(&t.a * &x * &x + &t.c * &z * &z);
            if let Some(y) = exact_div(&num, &t.b).and_then(|q| exact_sqrt(&q)) {
                return Some([x, y, z]);
            }
        }
    }
    None
}

/// Quadratic forms `Px, Py, Pz` with `A·Px² + B·Py² + C·Pz² ≡ 0`, built from
/// a base point with `z₀ ≠ 0`. Every integer solution is
/// `(p/q)·(Px, Py, Pz)(m, n)` with coprime `m, n`, coprime `p, q` and
/// `q | q_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrization {
    pub ternary: TernaryForm,
    pub base: [Integer; 3],
    pub px: BinaryForm,
    pub py: BinaryForm,
    pub pz: BinaryForm,
    pub q_bound: Integer,
}

impl Parametrization {
    pub fn point(&self, m: &Integer, n: &Integer) -> [Integer; 3] {
        [self.px.evaluate(m, n), self.py.evaluate(m, n), self.pz.evaluate(m, n)]
    }
}

pub fn parametrize(t: &TernaryForm, base: &[Integer; 3]) -> Result<Parametrization> {
    let [x0, y0, z0] = base;
    if z0.is_zero() || !t.evaluate(x0, y0, z0).is_zero() {
        return Err(Error::Contract(format!(
            "({x0}, {y0}, {z0}) is not a base point with z != 0 for {t}"
        )));
    }
    let (a, b, c) = (&t.a, &t.b, &t.c);
    let two = int(2);
    let px = BinaryForm::new(x0 * a, &two * y0 * b, -(x0 * b));
    let py = BinaryForm::new(-(y0 * a), &two * x0 * a, y0 * b);
    let pz = BinaryForm::new(z0 * a, Integer::zero(), z0 * b);
    let q_bound = (&two * lcm(a, b) * c * z0 * z0).abs();
    Ok(Parametrization {
        ternary: t.clone(),
        base: base.clone(),
        px,
        py,
        pz,
        q_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(a: i64, b: i64, c: i64) -> TernaryForm {
        TernaryForm::from_i64(a, b, c).unwrap()
    }

    fn ints(v: [i64; 3]) -> [Integer; 3] {
        v.map(int)
    }

    #[test]
    fn local_solvability_examples() {
        assert!(!tf(1, 1, 1).locally_solvable());
        assert!(tf(8, -4, -1).locally_solvable());
        assert!(!tf(1, 1, -3).locally_solvable());
        assert!(tf(1, 1, -2).locally_solvable());
        assert!(!tf(1, 1, -7).locally_solvable());
        assert!(tf(1, 1, -5).locally_solvable());
    }

    #[test]
    fn local_screen_agrees_with_search_on_small_forms() {
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -6i64..=6 {
                    if a * b * c == 0 {
                        continue;
                    }
                    let t = tf(a, b, c);
                    let mut found = false;
                    'outer: for x in 0i64..=12 {
                        for y in 0i64..=12 {
                            for z in 0i64..=12 {
                                if (x, y, z) != (0, 0, 0) && a * x * x + b * y * y + c * z * z == 0 {
                                    found = true;
                                    break 'outer;
                                }
                            }
                        }
                    }
                    assert_eq!(t.locally_solvable(), found, "{t}");
                }
            }
        }
    }

    #[test]
    fn particular_solution_examples() {
        assert_eq!(particular_solution(&tf(8, -4, -1), 100).unwrap(), ints([1, 1, 2]));
        assert_eq!(particular_solution(&tf(1, -1, -2), 100).unwrap(), ints([3, 1, 2]));
        assert!(matches!(particular_solution(&tf(1, 1, 1), 100), Err(Error::Contract(_))));
        assert_eq!(particular_solution(&tf(1, 1, -2), 100).unwrap(), ints([1, 1, 1]));
    }

    #[test]
    fn particular_solution_bound_exhausted() {
        // z = 1 forces x² - y² = 2 (impossible mod 4); (1, 1, 0) is the only
        // solution of height 1.
        assert!(matches!(
            particular_solution(&tf(1, -1, -2), 1),
            Err(Error::DegenerateZ { .. })
        ));
    }

    #[test]
    fn ljunggren_parametrization() {
        let t = tf(8, -4, -1);
        let p = parametrize(&t, &ints([1, 1, 2])).unwrap();
        assert_eq!(p.px, BinaryForm::from_i64(8, -8, 4));
        assert_eq!(p.py, BinaryForm::from_i64(-8, 16, -4));
        assert_eq!(p.pz, BinaryForm::from_i64(16, 0, -8));
        assert_eq!(p.q_bound, int(64));
        let [x, y, z] = p.point(&int(1), &int(0));
        assert_eq!(t.evaluate(&x, &y, &z), int(0));
        assert_eq!(x * 8, int(64));
    }

    #[test]
    fn parametrize_rejects_bad_base() {
        let t = tf(8, -4, -1);
        assert!(parametrize(&t, &ints([1, 1, 1])).is_err());
        assert!(parametrize(&tf(1, -1, -2), &ints([1, 1, 0])).is_err());
    }

    #[test]
    fn hilbert_symbol_known_values() {
        assert_eq!(hilbert_symbol(&int(-1), &int(-1), &int(2)), -1);
        assert_eq!(hilbert_symbol(&int(2), &int(3), &int(3)), -1);
        assert_eq!(hilbert_symbol(&int(5), &int(5), &int(5)), 1);
        assert_eq!(hilbert_symbol(&int(3), &int(3), &int(3)), -1);
    }
}

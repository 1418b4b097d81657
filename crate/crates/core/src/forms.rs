//! Binary quadratic forms `a·x² + b·xy + c·y²`.
//!
//! Besides evaluation this module carries the two facts the reduction leans
//! on: a bound `G` with `gcd(P₁(m,n), P₂(m,n)) | G` for every coprime pair, and
//! a split of a non-degenerate form into a rational combination of two
//! squares of independent linear forms.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{Num, One, Zero};

use crate::arith::{denominator_lcm, gcd_all, int, rat_int, Integer, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm<T = Integer> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Clone + Num> BinaryForm<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn evaluate(&self, x: &T, y: &T) -> T {
        self.a.clone() * x.clone() * x.clone()
            + self.b.clone() * x.clone() * y.clone()
            + self.c.clone() * y.clone() * y.clone()
    }

    pub fn discriminant(&self) -> T {
        let four = T::one() + T::one() + T::one() + T::one();
        self.b.clone() * self.b.clone() - four * self.a.clone() * self.c.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn scale(&self, k: &T) -> Self {
        BinaryForm {
            a: self.a.clone() * k.clone(),
            b: self.b.clone() * k.clone(),
            c: self.c.clone() * k.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        BinaryForm {
            a: self.a.clone() + other.a.clone(),
            b: self.b.clone() + other.b.clone(),
            c: self.c.clone() + other.c.clone(),
        }
    }

    pub fn coefficients(&self) -> [&T; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// Product of two quadratic forms as quartic coefficients, `x⁴` first.
    pub fn mul(&self, o: &Self) -> [T; 5] {
        let (a, b, c) = (self.a.clone(), self.b.clone(), self.c.clone());
        let (d, e, f) = (o.a.clone(), o.b.clone(), o.c.clone());
        [
            a.clone() * d.clone(),
            a.clone() * e.clone() + b.clone() * d.clone(),
            a.clone() * f.clone() + b.clone() * e.clone() + c.clone() * d.clone(),
            b * f.clone() + c.clone() * e,
            c * f,
        ]
    }
}

impl BinaryForm<Integer> {
    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        BinaryForm::new(int(a), int(b), int(c))
    }

    pub fn content(&self) -> Integer {
        gcd_all(self.coefficients())
    }

    pub fn to_rational(&self) -> BinaryForm<Rational> {
        BinaryForm::new(rat_int(&self.a), rat_int(&self.b), rat_int(&self.c))
    }
}

impl BinaryForm<Rational> {
    /// Returns `(ℓ, ℓ·f)` where `ℓ` is the lcm of the coefficient denominators.
    pub fn clear_denominators(&self) -> (Integer, BinaryForm<Integer>) {
        let l = denominator_lcm(self.coefficients());
        let lr = rat_int(&l);
        let s = self.scale(&lr);
        (
            l,
            BinaryForm::new(s.a.to_integer(), s.b.to_integer(), s.c.to_integer()),
        )
    }
}

impl fmt::Display for BinaryForm<Integer> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Linear form `x·X + y·Y` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub x: Integer,
    pub y: Integer,
}

impl LinearForm {
    pub fn new(x: Integer, y: Integer) -> Self {
        LinearForm { x, y }
    }

    pub fn evaluate(&self, m: &Integer, n: &Integer) -> Integer {
        &self.x * m + &self.y * n
    }

    fn primitive(self) -> (Integer, LinearForm) {
        let g = self.x.gcd(&self.y);
        if g.is_zero() || g.is_one() {
            return (Integer::one(), self);
        }
        let lf = LinearForm::new(&self.x / &g, &self.y / &g);
        (g, lf)
    }

    pub fn square(&self) -> BinaryForm<Integer> {
        BinaryForm::new(
            &self.x * &self.x,
            int(2) * &self.x * &self.y,
            &self.y * &self.y,
        )
    }
}

/// Sylvester-type matrix whose columns are the coefficient vectors of
/// `x·P₁, y·P₁, x·P₂, y·P₂` in the basis `x³, x²y, xy², y³`.
pub fn resultant_matrix(f: &BinaryForm, g: &BinaryForm) -> [[Integer; 4]; 4] {
    let z = Integer::zero;
    [
        [f.a.clone(), z(), g.a.clone(), z()],
        [f.b.clone(), f.a.clone(), g.b.clone(), g.a.clone()],
        [f.c.clone(), f.b.clone(), g.c.clone(), g.b.clone()],
        [z(), f.c.clone(), z(), g.c.clone()],
    ]
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(rows: &[Vec<Integer>]) -> Integer {
    let n = rows.len();
    if n == 0 {
        return Integer::one();
    }
    let mut m: Vec<Vec<Integer>> = rows.to_vec();
    let mut sign = Integer::one();
    let mut prev = Integer::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Integer::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> Integer {
    let m = resultant_matrix(f, g);
    determinant(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultantData {
    pub matrix: [[Integer; 4]; 4],
    pub resultant: Integer,
    pub gcd_bound: Integer,
    /// Rational solution of the system producing `x³`.
    pub solution_x: [Rational; 4],
    /// Rational solution of the system producing `y³`.
    pub solution_y: [Rational; 4],
    /// `G·solution_x`; integer weights giving `G·x³`.
    pub combo_x: [Integer; 4],
    pub combo_y: [Integer; 4],
}

/// Solves the two resultant-matrix systems exactly (Cramer's rule over
/// Bareiss determinants) and returns `G`, the lcm of all denominators.
pub fn gcd_bound(f: &BinaryForm, g: &BinaryForm) -> Result<ResultantData> {
    let matrix = resultant_matrix(f, g);
    let rows: Vec<Vec<Integer>> = matrix.iter().map(|r| r.to_vec()).collect();
    let r = determinant(&rows);
    if r.is_zero() {
        return Err(Error::SingularPair);
    }
    let solve = |unit_row: usize| -> [Rational; 4] {
        std::array::from_fn(|col| {
            let mut replaced = rows.clone();
            for (i, row) in replaced.iter_mut().enumerate() {
                row[col] = if i == unit_row { Integer::one() } else { Integer::zero() };
            }
            Rational::new(determinant(&replaced), r.clone())
        })
    };
    let solution_x = solve(0);
    let solution_y = solve(3);
    let gb = denominator_lcm(solution_x.iter().chain(solution_y.iter()));
    let gr = rat_int(&gb);
    let scale = |s: &[Rational; 4]| -> [Integer; 4] {
        std::array::from_fn(|i| (&s[i] * &gr).to_integer())
    };
    Ok(ResultantData {
        combo_x: scale(&solution_x),
        combo_y: scale(&solution_y),
        matrix,
        resultant: r,
        gcd_bound: gb,
        solution_x,
        solution_y,
    })
}

/// `alpha·L1² + beta·L2²` with independent integer linear forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSquareDecomposition {
    pub alpha: Rational,
    pub beta: Rational,
    pub l1: LinearForm,
    pub l2: LinearForm,
}

impl TwoSquareDecomposition {
    pub fn expand(&self) -> BinaryForm<Rational> {
        self.l1
            .square()
            .to_rational()
            .scale(&self.alpha)
            .add(&self.l2.square().to_rational().scale(&self.beta))
    }

    /// Determinant of the 2×2 matrix with rows `l1`, `l2`.
    pub fn determinant(&self) -> Integer {
        &self.l1.x * &self.l2.y - &self.l1.y * &self.l2.x
    }
}

/// Splits a non-degenerate form into two weighted squares. The `a ≠ 0`
/// completion is preferred, then `c ≠ 0`, then the `b·xy` identity.
/// Linear forms are made primitive with the content folded into the weight.
pub fn two_square_decompose(f: &BinaryForm) -> Result<TwoSquareDecomposition> {
    if f.discriminant().is_zero() {
        return Err(Error::DegenerateForm);
    }
    let (a, b, c) = (&f.a, &f.b, &f.c);
    let four_ac_b2 = int(4) * a * c - b * b;
    let (alpha, l1, beta, l2) = if !a.is_zero() {
        (
            Rational::new(Integer::one(), int(4) * a),
            LinearForm::new(int(2) * a, b.clone()),
            Rational::new(four_ac_b2, int(4) * a),
            LinearForm::new(Integer::zero(), Integer::one()),
        )
    } else if !c.is_zero() {
        (
            Rational::new(four_ac_b2, int(4) * c),
            LinearForm::new(Integer::one(), Integer::zero()),
            Rational::new(Integer::one(), int(4) * c),
            LinearForm::new(b.clone(), int(2) * c),
        )
    } else {
        let q = Rational::new(b.clone(), int(4));
        (
            q.clone(),
            LinearForm::new(Integer::one(), Integer::one()),
            -q,
            LinearForm::new(Integer::one(), -Integer::one()),
        )
    };
    let (g1, l1) = l1.primitive();
    let (g2, l2) = l2.primitive();
    let out = TwoSquareDecomposition {
        alpha: alpha * rat_int(&(&g1 * &g1)),
        beta: beta * rat_int(&(&g2 * &g2)),
        l1,
        l2,
    };
    debug_assert_eq!(out.expand(), f.to_rational());
    Ok(out)
}

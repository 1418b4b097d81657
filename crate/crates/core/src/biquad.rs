//! Integral points on `y² = a·x⁴ + b·x² + c`.
//!
//! The curve is rewritten as a diagonal conic in `(x², y, ·)`, the conic is
//! parametrized, and `x² = P₁(m, n) / P₂(m, n)` is handed to the
//! fraction-square solver.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::arith::{denominator_lcm, exact_div, exact_sqrt, int, rat_int, Integer, Rational};
use crate::error::{Error, Result};
use crate::forms::BinaryForm;
use crate::fracsquare::{reduce, solve_frac_square, Reduction, Triples, Unresolved};
use crate::ternary::{parametrize, particular_solution, Parametrization, TernaryForm};
use crate::thue::{Provenance, ThueBackend};

/// `y² = a·x⁴ + b·x² + c` with integer coefficients. A rational curve is
/// scaled by `L²`, so its integral points are the points `(x, y′)` of the
/// scaled curve with `L | y′`, `y = y′ / L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiquadraticCurve {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    pub scale: Integer,
}

impl BiquadraticCurve {
    pub fn new(a: Integer, b: Integer, c: Integer) -> Result<Self> {
        Self::normalize(&rat_int(&a), &rat_int(&b), &rat_int(&c))
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(int(a), int(b), int(c))
    }

    pub fn normalize(a: &Rational, b: &Rational, c: &Rational) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::UnsupportedCurve("a = 0".into()));
        }
        if c.is_zero() {
            return Err(Error::UnsupportedCurve("c = 0".into()));
        }
        let disc = b * b - Rational::from_integer(int(4)) * a * c;
        if disc.is_zero() {
            return Err(Error::UnsupportedCurve("b^2 - 4ac = 0".into()));
        }
        let l = denominator_lcm([a, b, c]);
        let l2 = rat_int(&(&l * &l));
        Ok(BiquadraticCurve {
            a: (a * &l2).to_integer(),
            b: (b * &l2).to_integer(),
            c: (c * &l2).to_integer(),
            scale: l,
        })
    }

    pub fn evaluate(&self, x: &Integer) -> Integer {
        let x2 = x * x;
        (&self.a * &x2 + &self.b) * &x2 + &self.c
    }

    /// `y ≥ 0` on the unscaled curve, if `x` gives an integral point.
    pub fn y_at(&self, x: &Integer) -> Option<Integer> {
        exact_sqrt(&self.evaluate(x)).and_then(|y| exact_div(&y, &self.scale))
    }

    pub fn discriminant(&self) -> Integer {
        &self.b * &self.b - int(4) * &self.a * &self.c
    }
}

impl fmt::Display for BiquadraticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: &Integer| if v.is_negative() { "-" } else { "+" };
        write!(
            f,
            "y^2 = {}*x^4 {} {}*x^2 {} {}",
            self.a,
            sign(&self.b),
            self.b.abs(),
            sign(&self.c),
            self.c.abs()
        )?;
        if !self.scale.is_one() {
            write!(f, " (y scaled by {})", self.scale)?;
        }
        Ok(())
    }
}

/// Which multiple of the curve equation becomes the conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// `(b² − 4ac)·(x²)² + 4c·y² − (b·x² + 2c)² = 0`.
    FourC,
    /// `(2a·x² + b)² − 4a·y² + (4ac − b²) = 0`.
    FourA,
    /// The one whose conic has the smaller `max(|A|, |B|)`, ties to `FourC`.
    #[default]
    Auto,
}

impl Strategy {
    pub fn resolve(self, curve: &BiquadraticCurve) -> Strategy {
        match self {
            Strategy::Auto => {
                let cost_c = curve.discriminant().abs().max(int(4) * curve.c.abs());
                let cost_a = (int(4) * curve.a.abs()).max(Integer::one());
                if cost_c <= cost_a {
                    Strategy::FourC
                } else {
                    Strategy::FourA
                }
            }
            s => s,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::FourC => "4c",
            Strategy::FourA => "4a",
            Strategy::Auto => "auto",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4c" => Ok(Strategy::FourC),
            "4a" => Ok(Strategy::FourA),
            "auto" => Ok(Strategy::Auto),
            _ => Err(Error::Domain(format!("unknown strategy `{s}` (expected 4c, 4a or auto)"))),
        }
    }
}

/// The fraction-square instance `x² = P₁ / P₂` for a curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    pub strategy: Strategy,
    pub parametrization: Parametrization,
    pub p1: BinaryForm,
    pub p2: BinaryForm,
}

/// `None` when the conic has no rational point, hence the curve no integral
/// point: `W = 1` in the 4a conic, and `y = x = 0` forces `Z = 2c ≠ 0` in the 4c one.
pub fn curve_model(curve: &BiquadraticCurve, strategy: Strategy, height_bound: u64) -> Result<Option<CurveModel>> {
    let (a, b, c) = (&curve.a, &curve.b, &curve.c);
    let strategy = strategy.resolve(curve);
    let ternary = match strategy {
        Strategy::FourC => TernaryForm::new(curve.discriminant(), int(4) * c, -Integer::one())?,
        _ => TernaryForm::new(Integer::one(), int(-4) * a, -curve.discriminant())?,
    }
    .normalized();
    if !ternary.locally_solvable() {
        return Ok(None);
    }
    let base = particular_solution(&ternary, height_bound).map_err(|e| e.in_branch(format!("{strategy} conic")))?;
    let param = parametrize(&ternary, &base)?;
    let (px, pz) = (&param.px, &param.pz);
    let (p1, p2) = match strategy {
        Strategy::FourC => (px.scale(&(int(2) * c)), pz.add(&px.scale(&-b))),
        _ => (px.add(&pz.scale(&-b)), pz.scale(&(int(2) * a))),
    };
    Ok(Some(CurveModel {
        strategy,
        parametrization: param,
        p1,
        p2,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoints {
    /// Points with `x, y ≥ 0` on the unscaled curve.
    pub points: BTreeSet<(Integer, Integer)>,
    pub provenance: Provenance,
    pub strategy: Strategy,
    pub unresolved: Vec<Unresolved>,
}

impl CurvePoints {
    /// Every sign variant of the stored points.
    pub fn with_signs(&self) -> BTreeSet<(Integer, Integer)> {
        self.points
            .iter()
            .flat_map(|(x, y)| [(x.clone(), y.clone()), (-x, y.clone()), (x.clone(), -y), (-x, -y)])
            .collect()
    }
}

pub fn solve_curve(
    curve: &BiquadraticCurve,
    backend: &dyn ThueBackend,
    strategy: Strategy,
    height_bound: u64,
) -> Result<CurvePoints> {
    let Some(model) = curve_model(curve, strategy, height_bound)? else {
        return Ok(CurvePoints {
            points: BTreeSet::new(),
            provenance: Provenance::Exact,
            strategy: strategy.resolve(curve),
            unresolved: Vec::new(),
        });
    };
    let frac = solve_frac_square(&model.p1, &model.p2, backend, height_bound)?;
    let mut points = BTreeSet::new();
    let mut xs: BTreeSet<Integer> = frac.solutions.into_iter().map(|(_, _, k)| k).collect();
    xs.insert(Integer::zero());
    for x in xs {
        if let Some(y) = curve.y_at(&x) {
            points.insert((x, y));
        }
    }
    for (x, y) in &points {
        let yy = y * &curve.scale;
        if &yy * &yy != curve.evaluate(x) {
            return Err(Error::Contract(format!("({x}, {y}) is not on {curve}")));
        }
    }
    Ok(CurvePoints {
        points,
        provenance: frac.provenance,
        strategy: model.strategy,
        unresolved: frac.reduction.unresolved,
    })
}

/// The Thue batch `solve_curve` would dispatch, without solving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThueBatch {
    pub curve: BiquadraticCurve,
    pub strategy: Strategy,
    /// `None` when the conic has no rational point and nothing is emitted.
    pub model: Option<(CurveModel, Reduction)>,
}

pub fn emit_thue_batch(curve: &BiquadraticCurve, strategy: Strategy, height_bound: u64) -> Result<ThueBatch> {
    let model = match curve_model(curve, strategy, height_bound)? {
        Some(m) => {
            let r = reduce(&m.p1, &m.p2, height_bound)?;
            Some((m, r))
        }
        None => None,
    };
    Ok(ThueBatch {
        curve: curve.clone(),
        strategy: strategy.resolve(curve),
        model,
    })
}

fn join(vals: impl IntoIterator<Item = impl ToString>) -> String {
    vals.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ThueBatch {
    /// `# key=value` metadata lines, then one solver line per equation, each
    /// preceded by the parameter choices that produced it.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = |p: &BinaryForm| format!("{},{},{}", p.a, p.b, p.c);
        writeln!(f, "# curve={},{},{} scale={}", self.curve.a, self.curve.b, self.curve.c, self.curve.scale)?;
        let Some((model, r)) = &self.model else {
            writeln!(f, "# strategy={} conic=unsolvable", self.strategy)?;
            return writeln!(f, "# equations=0");
        };
        writeln!(f, "# strategy={} conic={}", self.strategy, model.parametrization.ternary)?;
        writeln!(f, "# P1={} P2={} G={}", form(&r.p1), form(&r.p2), r.gcd_bound)?;
        writeln!(f, "# g={}", join(r.surviving_g()))?;
        for u in &r.unresolved {
            writeln!(f, "# unresolved g={} reason={}", u.g, u.reason)?;
        }
        writeln!(f, "# equations={}", r.equations.len())?;
        for e in &r.equations {
            for o in &e.origins {
                writeln!(f, "# origin g={} d={} p={} q={}", o.g, o.d, o.p, o.q)?;
            }
            if let Some(m) = &e.obstruction {
                writeln!(f, "# obstructed mod {m}")?;
            }
            writeln!(f, "{}", e.equation.wire_line())?;
        }
        Ok(())
    }
}

/// `Y² = X³ + b·X² + ac·X` via `X = a·x²`, `Y = a·x·y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticModel {
    pub a: Integer,
    pub b: Integer,
    pub ac: Integer,
}

pub fn emit_elliptic_model(curve: &BiquadraticCurve) -> EllipticModel {
    EllipticModel {
        a: curve.a.clone(),
        b: curve.b.clone(),
        ac: &curve.a * &curve.c,
    }
}

impl EllipticModel {
    pub fn equation(&self) -> String {
        let term = |c: &Integer, mono: &str| {
            let sign = if c.is_negative() { "-" } else { "+" };
            format!(" {sign} {}*{mono}", c.abs())
        };
        format!("Y^2 = X^3{}{}", term(&self.b, "X^2"), term(&self.ac, "X"))
    }

    pub fn substitution(&self) -> String {
        format!("X = {a}*x^2, Y = {a}*x*y", a = self.a)
    }
}

impl fmt::Display for EllipticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with {}", self.equation(), self.substitution())
    }
}

/// Solutions `(x, y, z)` with `x, y ≥ 0` of `z = a·x² + d₁`, `z² = b·y² + d₂`.
pub fn reduce_system(
    a: &Rational,
    d1: &Rational,
    b: &Rational,
    d2: &Rational,
    backend: &dyn ThueBackend,
    strategy: Strategy,
    height_bound: u64,
) -> Result<(Triples, Provenance)> {
    let c = d1 * d1 - d2;
    for (v, name) in [(a, "a"), (b, "b"), (d2, "d2"), (&c, "d1^2 - d2")] {
        if v.is_zero() {
            return Err(Error::UnsupportedSystem(format!("{name} = 0")));
        }
    }
    // (b·y)² = a²b·x⁴ + 2ab·d₁·x² + b·(d₁² − d₂)
    let two = Rational::from_integer(int(2));
    let curve = BiquadraticCurve::normalize(&(a * a * b), &(two * a * b * d1), &(b * &c))?;
    let pts = solve_curve(&curve, backend, strategy, height_bound)?;
    let mut out = BTreeSet::new();
    for (x, by) in &pts.points {
        let xr = rat_int(x);
        let y = Rational::from_integer(by.clone()) / b;
        let z = a * &xr * &xr + d1;
        if !y.is_integer() || !z.is_integer() {
            continue;
        }
        if &z * &z != b * &y * &y + d2 {
            return Err(Error::Contract(format!("({x}, {y}, {z}) fails the system")));
        }
        out.insert((x.clone(), y.to_integer().abs(), z.to_integer()));
    }
    Ok((out, pts.provenance))
}

//! `z² = P₁(x, y) / P₂(x, y)` in coprime integers.
//!
//! For a solution `P₂(x, y) = g·d²` with `g` square-free and `g·d² | G`, and
//! then `P₁(x, y) = g·(k·d)²`. Writing `P₁ = α·L₁² + β·L₂²` turns the second
//! condition into the conic `α·Q₁² + β·Q₂² = g·z²`. Its parametrization gives
//! `(x, y) = (p/q)·(Sx, Sy)(m, n)` with quadratic `Sx, Sy`, and the first
//! condition becomes the quartic Thue equation
//! `ℓ_g·P₂(Sx, Sy)(m, n) = q²·g·d²·ℓ_g / p²`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{
    denominator_lcm, exact_div, exact_sqrt, factorize, is_squarefree, positive_divisors, rat_int, signed_divisors,
    valuation, Integer, Rational,
};
use crate::error::{Error, Result};
use crate::forms::{gcd_bound, two_square_decompose, BinaryForm, TwoSquareDecomposition};
use crate::ternary::{parametrize, particular_solution, Parametrization, TernaryForm};
use crate::thue::{canonical_pair, local_obstruction, Provenance, QuarticForm, SolutionSet, ThueBackend, ThueEquation};

/// Congruence screens on moduli larger than this are skipped.
const SCREEN_MODULUS_CAP: u64 = 512;

/// One value of `g` that passed the local screens and has a parametrized conic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSystem {
    pub g: Integer,
    pub decomposition: TwoSquareDecomposition,
    /// `α·Q₁² + β·Q₂² − g·z² = 0` cleared to integers.
    pub ternary: TernaryForm,
    pub parametrization: Parametrization,
    pub sx: BinaryForm<Rational>,
    pub sy: BinaryForm<Rational>,
    pub ell_g: Integer,
    /// `ℓ_g·P₂(Sx, Sy)`.
    pub quartic: QuarticForm,
    /// Admissible `d` with `d² | G/g`.
    pub ds: Vec<Integer>,
}

impl SplitSystem {
    /// `(p/q)·(Sx, Sy)(m, n)` when both coordinates are integers.
    pub fn map_back(&self, m: &Integer, n: &Integer, p: &Integer, q: &Integer) -> Option<(Integer, Integer)> {
        let (m, n) = (rat_int(m), rat_int(n));
        let scale = Rational::new(p.clone(), q.clone());
        let x = self.sx.evaluate(&m, &n) * &scale;
        let y = self.sy.evaluate(&m, &n) * &scale;
        (x.is_integer() && y.is_integer()).then(|| (x.to_integer(), y.to_integer()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EquationOrigin {
    pub g: Integer,
    pub d: Integer,
    pub p: Integer,
    pub q: Integer,
}

/// A distinct `(LHS, RHS)` pair with every parameter choice that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedEquation {
    pub equation: ThueEquation,
    pub origins: Vec<EquationOrigin>,
    /// A prime power modulo which the equation has no coprime solution; such
    /// equations are not dispatched.
    pub obstruction: Option<Integer>,
}

/// A `g` whose conic passed the local screen but had no particular solution
/// within the height bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unresolved {
    pub g: Integer,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub p1: BinaryForm,
    pub p2: BinaryForm,
    pub gcd_bound: Integer,
    pub decomposition: TwoSquareDecomposition,
    pub systems: Vec<SplitSystem>,
    pub equations: Vec<EmittedEquation>,
    pub unresolved: Vec<Unresolved>,
    pub height_bound: u64,
}

impl Reduction {
    /// Values of `g` that passed both local screens.
    pub fn surviving_g(&self) -> Vec<Integer> {
        let mut v: Vec<Integer> = self
            .systems
            .iter()
            .map(|s| s.g.clone())
            .chain(self.unresolved.iter().map(|u| u.g.clone()))
            .collect();
        v.sort();
        v
    }

    fn system(&self, g: &Integer) -> Option<&SplitSystem> {
        self.systems.iter().find(|s| &s.g == g)
    }
}

/// Canonical `(m, n, k)` with `k ≥ 0`.
pub type Triples = BTreeSet<(Integer, Integer, Integer)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracSquareSolutionSet {
    pub solutions: Triples,
    pub provenance: Provenance,
    pub reduction: Reduction,
}

/// The conic for `g`, cleared to integers and normalized.
pub fn split_ternary(dec: &TwoSquareDecomposition, g: &Integer) -> Result<TernaryForm> {
    let l = rat_int(&denominator_lcm([&dec.alpha, &dec.beta]));
    let a = (&dec.alpha * &l).to_integer();
    let b = (&dec.beta * &l).to_integer();
    let c = -(l.to_integer() * g);
    Ok(TernaryForm::new(a, b, c)?.normalized())
}

pub fn local_screen_g(dec: &TwoSquareDecomposition, g: &Integer) -> bool {
    !g.is_zero() && split_ternary(dec, g).map(|t| t.locally_solvable()).unwrap_or(false)
}

/// Necessary condition for `P₂(x, y) = target` with coprime `x, y`: a solution
/// with `x, y` not both divisible by `ℓ` modulo `ℓ^(v+1)` (`ℓ^(v+3)` for
/// `ℓ = 2`), where `v = v_ℓ(target)`, for every listed prime.
pub fn value_screen(p2: &BinaryForm, target: &Integer, primes: &[Integer]) -> bool {
    primes.iter().all(|l| {
        let extra = if *l == Integer::from(2) { 3 } else { 1 };
        let e = valuation(target, l) + extra;
        let modulus = l.pow(e);
        let Some(md) = modulus.to_u64().filter(|m| *m <= SCREEN_MODULUS_CAP) else {
            return true;
        };
        let ld = l.to_u64().expect("small prime");
        let red = |v: &Integer| v.mod_floor(&modulus).to_u64().expect("reduced");
        let (a, b, c, t) = (red(&p2.a), red(&p2.b), red(&p2.c), red(target));
        (0..md).any(|x| {
            (0..md).any(|y| (x % ld != 0 || y % ld != 0) && (a * x * x + b * x * y + c * y * y) % md == t)
        })
    })
}

/// Builds every split system and emits the deduplicated Thue batch.
pub fn reduce(p1: &BinaryForm, p2: &BinaryForm, height_bound: u64) -> Result<Reduction> {
    if p1.discriminant().is_zero() || p2.discriminant().is_zero() {
        return Err(Error::DegenerateForm);
    }
    let content = p1.content().gcd(&p2.content());
    let p1 = BinaryForm::new(&p1.a / &content, &p1.b / &content, &p1.c / &content);
    let p2 = BinaryForm::new(&p2.a / &content, &p2.b / &content, &p2.c / &content);
    let big_g = gcd_bound(&p1, &p2)?.gcd_bound;
    let decomposition = two_square_decompose(&p1)?;
    let primes: Vec<Integer> = factorize(&(&big_g * 2u32))?.into_iter().map(|(p, _)| p).collect();

    let mut systems = Vec::new();
    let mut unresolved = Vec::new();
    let mut batch: BTreeMap<(QuarticForm, Integer), Vec<EquationOrigin>> = BTreeMap::new();
    for g in signed_divisors(&big_g)? {
        if !is_squarefree(&g) || !local_screen_g(&decomposition, &g) {
            continue;
        }
        let cofactor = &big_g / g.abs();
        let ds: Vec<Integer> = positive_divisors(&cofactor)?
            .into_iter()
            .filter(|d| cofactor.is_multiple_of(&(d * d)))
            .filter(|d| value_screen(&p2, &(&g * d * d), &primes))
            .collect();
        if ds.is_empty() {
            continue;
        }
        let ternary = split_ternary(&decomposition, &g)?;
        let base = match particular_solution(&ternary, height_bound) {
            Ok(b) => b,
            Err(e @ (Error::TernaryNotFound { .. } | Error::DegenerateZ { .. })) => {
                unresolved.push(Unresolved {
                    g,
                    reason: e.to_string(),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let param = parametrize(&ternary, &base)?;
        let (sx, sy) = solve_linear(&decomposition, &param);
        let p2r = p2.to_rational();
        let sxx = sx.mul(&sx);
        let sxy = sx.mul(&sy);
        let syy = sy.mul(&sy);
        let rq: [Rational; 5] =
            std::array::from_fn(|i| &p2r.a * &sxx[i] + &p2r.b * &sxy[i] + &p2r.c * &syy[i]);
        let ell_g = denominator_lcm(rq.iter());
        let ell_r = rat_int(&ell_g);
        let quartic = QuarticForm::new(rq.each_ref().map(|c| (c * &ell_r).to_integer()))?;

        let q_divisors = positive_divisors(&param.q_bound)?;
        let mut local: BTreeMap<Integer, Vec<EquationOrigin>> = BTreeMap::new();
        for d in &ds {
            let numer = &g * d * d * &ell_g;
            for p in positive_divisors(&numer.abs())? {
                let Some(base_rhs) = exact_div(&numer, &(&p * &p)) else {
                    continue;
                };
                for q in &q_divisors {
                    if !p.gcd(q).is_one() {
                        continue;
                    }
                    let rhs = q * q * &base_rhs;
                    local.entry(rhs).or_default().push(EquationOrigin {
                        g: g.clone(),
                        d: d.clone(),
                        p: p.clone(),
                        q: q.clone(),
                    });
                }
            }
        }
        for (rhs, origins) in local {
            batch.entry((quartic.clone(), rhs)).or_default().extend(origins);
        }
        systems.push(SplitSystem {
            g,
            decomposition: decomposition.clone(),
            ternary,
            parametrization: param,
            sx,
            sy,
            ell_g,
            quartic,
            ds,
        });
    }
    let mut last: Option<ThueEquation> = None;
    let equations = batch
        .into_iter()
        .map(|((form, rhs), origins)| {
            let equation = match &last {
                Some(e) if e.form == form => e.with_rhs(rhs),
                _ => ThueEquation::new(form, rhs),
            };
            last = Some(equation.clone());
            EmittedEquation {
                obstruction: local_obstruction(&equation),
                equation,
                origins,
            }
        })
        .collect();
    Ok(Reduction {
        p1,
        p2,
        gcd_bound: big_g,
        decomposition,
        systems,
        equations,
        unresolved,
        height_bound,
    })
}

/// Inverts `(Q₁, Q₂) = (L₁, L₂)(x, y)` on the parametrized `Q₁ = Px`, `Q₂ = Py`.
fn solve_linear(dec: &TwoSquareDecomposition, param: &Parametrization) -> (BinaryForm<Rational>, BinaryForm<Rational>) {
    let det = rat_int(&dec.determinant());
    let px = param.px.to_rational();
    let py = param.py.to_rational();
    let combine = |u: &Integer, v: &Integer| {
        px.scale(&(rat_int(u) / &det)).add(&py.scale(&(rat_int(v) / &det)))
    };
    let sx = combine(&dec.l2.y, &-&dec.l1.y);
    let sy = combine(&-&dec.l2.x, &dec.l1.x);
    (sx, sy)
}

/// All coprime `(x, y)` with `P₁(x, y) = k²·P₂(x, y)`.
pub fn solve_frac_square(
    p1: &BinaryForm,
    p2: &BinaryForm,
    backend: &dyn ThueBackend,
    height_bound: u64,
) -> Result<FracSquareSolutionSet> {
    let reduction = reduce(p1, p2, height_bound)?;
    let results: Vec<_> = reduction
        .equations
        .par_iter()
        .map(|e| {
            if e.obstruction.is_some() {
                return Ok(SolutionSet {
                    pairs: BTreeSet::new(),
                    provenance: Provenance::Exact,
                });
            }
            backend
                .solve(&e.equation)
                .map_err(|err| err.in_branch(format!("equation {}", e.equation)))
        })
        .collect::<Result<_>>()?;

    let mut provenance = Provenance::Exact;
    if !reduction.unresolved.is_empty() {
        provenance = Provenance::BoundedBy(Integer::from(height_bound));
    }
    let mut solutions = BTreeSet::new();
    for (e, set) in reduction.equations.iter().zip(&results) {
        provenance = provenance.merge(&set.provenance);
        for (m, n) in &set.pairs {
            for o in &e.origins {
                let sys = reduction.system(&o.g).expect("origin refers to a built system");
                let Some((x, y)) = sys.map_back(m, n, &o.p, &o.q) else {
                    continue;
                };
                if let Some(k) = frac_square_root(&reduction.p1, &reduction.p2, &x, &y) {
                    let (x, y) = canonical_pair(x, y);
                    solutions.insert((x, y, k));
                }
            }
        }
    }
    Ok(FracSquareSolutionSet {
        solutions,
        provenance,
        reduction,
    })
}

/// `k ≥ 0` with `P₁(x, y) = k²·P₂(x, y)` for coprime `(x, y)`.
pub fn frac_square_root(p1: &BinaryForm, p2: &BinaryForm, x: &Integer, y: &Integer) -> Option<Integer> {
    if !x.gcd(y).is_one() {
        return None;
    }
    let v2 = p2.evaluate(x, y);
    if v2.is_zero() {
        return None;
    }
    exact_div(&p1.evaluate(x, y), &v2).and_then(|r| exact_sqrt(&r))
}

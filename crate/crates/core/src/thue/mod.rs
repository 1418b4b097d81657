//! Quartic Thue and Thue-like equations `F(m, n) = d` in coprime integers.
//!
//! Solutions are reported in canonical form: the first non-zero coordinate
//! is positive, so `(m, n)` and `(-m, -n)` collapse to one entry.

mod external;
mod factor;
mod local;
mod reducible;
mod search;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Mutex;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::{int, Integer};
use crate::error::{Error, Result};

pub use external::{parse_solver_output, solve_external, ExternalSolver};
pub use factor::{classify, Factorization, HomogeneousFactor};
pub use local::{local_obstruction, solvable_p_adically};
pub use reducible::solve_reducible;
pub use search::{search_box, solve_bounded};

pub const DEFAULT_SEARCH_BOUND: u64 = 100_000;

/// `e4·m⁴ + e3·m³n + e2·m²n² + e1·mn³ + e0·n⁴`, stored as `[e4, e3, e2, e1, e0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuarticForm {
    pub coeffs: [Integer; 5],
}

impl QuarticForm {
    pub fn new(coeffs: [Integer; 5]) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::Domain("quartic form is identically zero".into()));
        }
        Ok(QuarticForm { coeffs })
    }

    pub fn from_i64(c: [i64; 5]) -> Result<Self> {
        QuarticForm::new(c.map(int))
    }

    pub fn evaluate(&self, m: &Integer, n: &Integer) -> Integer {
        eval_homogeneous(&self.coeffs, m, n)
    }

    /// Coefficients of `F(t, 1)`, lowest degree first.
    pub fn dehomogenized(&self) -> Vec<Integer> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn content(&self) -> Integer {
        self.coeffs.iter().fold(Integer::zero(), |g, c| g.gcd(c))
    }
}

impl fmt::Display for QuarticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const MONOMIALS: [&str; 5] = ["m^4", "m^3n", "m^2n^2", "mn^3", "n^4"];
        let mut first = true;
        for (c, mono) in self.coeffs.iter().zip(MONOMIALS) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}")?;
            }
            write!(f, "{mono}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Irreducible,
    Reducible(Factorization),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThueEquation {
    pub form: QuarticForm,
    pub rhs: Integer,
    pub classification: Classification,
}

impl ThueEquation {
    pub fn new(form: QuarticForm, rhs: Integer) -> Self {
        let classification = classify(&form);
        ThueEquation {
            form,
            rhs,
            classification,
        }
    }

    /// Same form as `self` with another right-hand side.
    pub fn with_rhs(&self, rhs: Integer) -> Self {
        ThueEquation {
            form: self.form.clone(),
            rhs,
            classification: self.classification.clone(),
        }
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self.classification, Classification::Irreducible)
    }

    pub fn holds(&self, m: &Integer, n: &Integer) -> bool {
        self.form.evaluate(m, n) == self.rhs
    }

    /// The external-solver line `e4 e3 e2 e1 e0 rhs`.
    pub fn wire_line(&self) -> String {
        let mut parts: Vec<String> = self.form.coeffs.iter().map(ToString::to_string).collect();
        parts.push(self.rhs.to_string());
        parts.join(" ")
    }

    pub fn parse_wire_line(line: &str) -> Result<Self> {
        let vals: Vec<Integer> = line
            .split_whitespace()
            .map(|t| t.parse::<Integer>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Domain(format!("malformed equation line `{line}`")))?;
        if vals.len() != 6 {
            return Err(Error::Domain(format!("expected 6 integers in `{line}`")));
        }
        let coeffs = [0, 1, 2, 3, 4].map(|i| vals[i].clone());
        Ok(ThueEquation::new(QuarticForm::new(coeffs)?, vals[5].clone()))
    }
}

impl fmt::Display for ThueEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.form, self.rhs)
    }
}

/// Completeness claim attached to a result.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Exact,
    /// Complete only within the stated search bound.
    BoundedBy(Integer),
}

impl Provenance {
    pub fn is_exact(&self) -> bool {
        matches!(self, Provenance::Exact)
    }

    pub fn merge(&self, other: &Provenance) -> Provenance {
        match (self, other) {
            (Provenance::Exact, p) | (p, Provenance::Exact) => p.clone(),
            (Provenance::BoundedBy(a), Provenance::BoundedBy(b)) => Provenance::BoundedBy(a.min(b).clone()),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Exact => write!(f, "exact"),
            Provenance::BoundedBy(b) => write!(f, "bounded by {b}"),
        }
    }
}

/// `Σ cᵢ·m^(k-i)·nⁱ` for coefficients listed from the pure `m` power down.
pub fn eval_homogeneous(coeffs: &[Integer], m: &Integer, n: &Integer) -> Integer {
    let mut acc = Integer::zero();
    let mut npow = Integer::one();
    for c in coeffs {
        acc = acc * m + c * &npow;
        npow *= n;
    }
    acc
}

pub fn canonical_pair(m: Integer, n: Integer) -> (Integer, Integer) {
    if m.is_negative() || (m.is_zero() && n.is_negative()) {
        (-m, -n)
    } else {
        (m, n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub pairs: BTreeSet<(Integer, Integer)>,
    pub provenance: Provenance,
}

impl SolutionSet {
    /// Canonicalizes and re-verifies every pair; a pair that fails the
    /// equation or is not coprime is a contract violation.
    pub fn verified(
        eq: &ThueEquation,
        pairs: impl IntoIterator<Item = (Integer, Integer)>,
        provenance: Provenance,
    ) -> Result<Self> {
        let mut out = BTreeSet::new();
        for (m, n) in pairs {
            if !m.gcd(&n).is_one() || !eq.holds(&m, &n) {
                return Err(Error::Contract(format!("({m}, {n}) is not a coprime solution of {eq}")));
            }
            out.insert(canonical_pair(m, n));
        }
        Ok(SolutionSet {
            pairs: out,
            provenance,
        })
    }

    /// Every sign variant `±(m, n)` of the stored pairs.
    pub fn with_signs(&self) -> Vec<(Integer, Integer)> {
        self.pairs
            .iter()
            .flat_map(|(m, n)| [(m.clone(), n.clone()), (-m, -n)])
            .collect()
    }
}

/// Strategy for solving one Thue equation.
pub trait ThueBackend: Send + Sync {
    fn solve(&self, eq: &ThueEquation) -> Result<SolutionSet>;
    fn describe(&self) -> String;
}

/// Box search for irreducible equations, factor casework for reducible ones.
#[derive(Debug, Clone)]
pub struct BoundedBackend {
    pub bound: u64,
}

impl Default for BoundedBackend {
    fn default() -> Self {
        BoundedBackend {
            bound: DEFAULT_SEARCH_BOUND,
        }
    }
}

impl ThueBackend for BoundedBackend {
    fn solve(&self, eq: &ThueEquation) -> Result<SolutionSet> {
        solve_bounded(eq, self.bound)
    }

    fn describe(&self) -> String {
        format!("bounded search, |m|, |n| <= {}", self.bound)
    }
}

/// Sends irreducible equations to an external exact solver. Reducible
/// equations and failed invocations go to the bounded search, so a
/// failure shows up as degraded provenance.
#[derive(Debug)]
pub struct ExternalBackend {
    pub solver: ExternalSolver,
    pub fallback_bound: u64,
    lock: Mutex<()>,
}

impl ExternalBackend {
    pub fn new(solver: ExternalSolver, fallback_bound: u64) -> Self {
        ExternalBackend {
            solver,
            fallback_bound,
            lock: Mutex::new(()),
        }
    }
}

impl ThueBackend for ExternalBackend {
    fn solve(&self, eq: &ThueEquation) -> Result<SolutionSet> {
        if !eq.is_irreducible() {
            return solve_bounded(eq, self.fallback_bound);
        }
        let result = if self.solver.reentrant {
            solve_external(eq, &self.solver)
        } else {
            let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
            solve_external(eq, &self.solver)
        };
        match result {
            Ok(s) => Ok(s),
            Err(Error::ExternalSolver { equation, reason }) => {
                eprintln!("warning: external solver failed on `{equation}`: {reason}; using bounded search");
                solve_bounded(eq, self.fallback_bound)
            }
            Err(e) => Err(e),
        }
    }

    fn describe(&self) -> String {
        format!("external solver `{}`", self.solver.command_line())
    }
}

//! Lucas sequences `U(P, Q)`, `V(P, Q)` with `|Q| = 1`, and their terms of
//! the form `a·m² + b`.
//!
//! With `D = P² - 4Q` the identity `Vₙ² - D·Uₙ² = 4·Qⁿ` turns a term
//! `t = a·x² + b` into an integral point on a biquadratic curve:
//! `y² = D·t² ± 4` for `U`, `(D·u)² = D·t² ∓ 4D` for `V`. When `V` meets
//! `b = ±2` the `-4` curve degenerates to `x²·(D·a²x² + 2Dab)`, handled as
//! the Pell–Fermat equation `w² - D·a²·x² = 2Dab`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::{exact_div, exact_sqrt, int, is_square, Integer};
use crate::biquad::{solve_curve, BiquadraticCurve, Strategy};
use crate::error::{Error, Result};
use crate::pell::{enumerate, solve_classes, PellFermat};
use crate::thue::{Provenance, ThueBackend};

/// Family terms verified and reported per infinite family.
pub const FAMILY_TERMS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    U,
    V,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::U => "U",
            Kind::V => "V",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" | "u" => Ok(Kind::U),
            "V" | "v" => Ok(Kind::V),
            _ => Err(Error::Domain(format!("unknown sequence kind `{s}`, expected U or V"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasSpec {
    pub kind: Kind,
    pub p: Integer,
    pub q: Integer,
    pub d: Integer,
}

impl LucasSpec {
    pub fn new(kind: Kind, p: Integer, q: Integer) -> Result<Self> {
        if !p.is_positive() || q.abs() != Integer::one() {
            return Err(Error::UnsupportedSpec(format!("need P > 0 and |Q| = 1, got ({p},{q})")));
        }
        let d = &p * &p - int(4) * &q;
        if !d.is_positive() || is_square(&d) {
            return Err(Error::UnsupportedSpec(format!("(P,Q)=({p},{q}) is degenerate, D = {d}")));
        }
        Ok(LucasSpec { kind, p, q, d })
    }

    pub fn from_i64(kind: Kind, p: i64, q: i64) -> Result<Self> {
        LucasSpec::new(kind, int(p), int(q))
    }

    /// The other sequence with the same parameters.
    pub fn companion(&self) -> LucasSpec {
        LucasSpec {
            kind: match self.kind {
                Kind::U => Kind::V,
                Kind::V => Kind::U,
            },
            ..self.clone()
        }
    }

    fn check_recognizable(&self) -> Result<()> {
        if self.p == int(3) && self.q.is_one() {
            return Err(Error::UnsupportedSpec("(P,Q)=(3,1) unsupported".into()));
        }
        Ok(())
    }

    /// `±1` values taken by `Qⁿ`.
    fn signs(&self) -> Vec<i64> {
        if self.q.is_one() {
            vec![1]
        } else {
            vec![1, -1]
        }
    }

    pub fn iter(&self) -> Terms {
        let first = match self.kind {
            Kind::U => Integer::zero(),
            Kind::V => int(2),
        };
        let second = match self.kind {
            Kind::U => Integer::one(),
            Kind::V => self.p.clone(),
        };
        Terms {
            p: self.p.clone(),
            q: self.q.clone(),
            cur: first,
            next: second,
        }
    }
}

impl fmt::Display for LucasSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind, self.p, self.q)
    }
}

/// The sequence by its recurrence `sₙ₊₁ = P·sₙ - Q·sₙ₋₁`.
#[derive(Debug, Clone)]
pub struct Terms {
    p: Integer,
    q: Integer,
    cur: Integer,
    next: Integer,
}

impl Iterator for Terms {
    type Item = Integer;

    fn next(&mut self) -> Option<Integer> {
        let after = &self.p * &self.next - &self.q * &self.cur;
        let out = std::mem::replace(&mut self.cur, std::mem::replace(&mut self.next, after));
        Some(out)
    }
}

pub fn terms(spec: &LucasSpec, count: usize) -> Vec<Integer> {
    spec.iter().take(count).collect()
}

/// The least index of `t`, if `t` is a term.
pub fn recognize(spec: &LucasSpec, t: &Integer) -> Result<Option<usize>> {
    spec.check_recognizable()?;
    if t.is_negative() {
        return Ok(None);
    }
    if spec.kind == Kind::U && t.is_zero() {
        return Ok(Some(0));
    }
    let d = &spec.d;
    let passes = spec.signs().into_iter().any(|s| match spec.kind {
        Kind::U => is_square(&(d * t * t + int(4 * s))),
        Kind::V => exact_div(&(t * t - int(4 * s)), d).is_some_and(|r| !r.is_negative() && is_square(&r)),
    });
    if !passes {
        return Ok(None);
    }
    // both sequences increase from index 1 on
    for (n, term) in spec.iter().enumerate() {
        if &term == t {
            return Ok(Some(n));
        }
        if n >= 1 && &term > t {
            break;
        }
    }
    Err(Error::Contract(format!("{t} passes the square test but is not a term of {spec}")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearMultipleQuery {
    pub spec: LucasSpec,
    pub a: Integer,
    pub b: Integer,
}

impl NearMultipleQuery {
    pub fn new(spec: LucasSpec, a: Integer, b: Integer) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Domain("a = 0".into()));
        }
        Ok(NearMultipleQuery { spec, a, b })
    }

    /// The `m ≥ 0` with `t = a·m² + b`, if any.
    pub fn root(&self, t: &Integer) -> Option<Integer> {
        exact_div(&(t - &self.b), &self.a).filter(|r| !r.is_negative()).and_then(|r| exact_sqrt(&r))
    }
}

impl fmt::Display for NearMultipleQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}*m^2 + {}", self.spec, self.a, self.b)
    }
}

/// An infinite set of terms from one Pell–Fermat equation
/// `w² - d·x² = n`, with `t = a·x² + b` and index `≡ residue (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub pell_d: Integer,
    pub pell_n: Integer,
    pub modulus: usize,
    pub residue: usize,
    /// The first family terms as `(index, term, m)`, each verified.
    pub terms: Vec<(usize, Integer, Integer)>,
}

impl Family {
    pub fn label(&self, kind: Kind) -> String {
        match (self.modulus, self.residue) {
            (0, r) => format!("{kind}_{{{r}}}"),
            (k, 0) => format!("{kind}_{{{k}n}}"),
            (k, r) => format!("{kind}_{{{k}n+{r}}}"),
        }
    }

    pub fn contains_index(&self, n: usize) -> bool {
        if self.modulus == 0 {
            return n == self.residue;
        }
        n >= self.residue && n % self.modulus == self.residue
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearMultipleResult {
    pub query: NearMultipleQuery,
    pub finite_terms: BTreeSet<Integer>,
    pub family: Option<Family>,
    pub provenance: Provenance,
    /// Curve branches with an unresolved ternary search, as `(curve, reason)`.
    pub unresolved: Vec<(String, String)>,
}

impl NearMultipleResult {
    /// Terms with index at most `max_index` the result accounts for.
    pub fn terms_up_to(&self, max_index: usize) -> BTreeSet<Integer> {
        let mut out: BTreeSet<Integer> = BTreeSet::new();
        for (n, t) in self.query.spec.iter().take(max_index + 1).enumerate() {
            if self.finite_terms.contains(&t) || self.family.as_ref().is_some_and(|f| f.contains_index(n)) {
                out.insert(t);
            }
        }
        out
    }
}

impl fmt::Display for NearMultipleResult {
    /// Table style: `2, 11 and V_{4n+2}`, or `none`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite_terms.iter().map(|t| t.to_string()).collect();
        let label = self.family.as_ref().map(|fam| fam.label(self.query.spec.kind));
        match (parts.len(), label) {
            (0, None) => f.write_str("none"),
            (0, Some(l)) => f.write_str(&l),
            (_, None) => f.write_str(&parts.join(", ")),
            (_, Some(l)) => {
                let last = parts.pop().expect("non-empty");
                if parts.is_empty() {
                    write!(f, "{last} and {l}")
                } else {
                    write!(f, "{}, {last} and {l}", parts.join(", "))
                }
            }
        }
    }
}

/// The curves whose points carry the candidates `x`, with the scaling of
/// `y` they use.
fn curves(query: &NearMultipleQuery) -> Vec<(i64, Integer, Integer, Integer)> {
    let (a, b, d) = (&query.a, &query.b, &query.spec.d);
    let lead = d * a * a;
    let mid = int(2) * d * a * b;
    let mut out = Vec::new();
    for s in query.spec.signs() {
        let c = match query.spec.kind {
            Kind::U => d * b * b + int(4 * s),
            Kind::V => d * (b * b - int(4 * s)),
        };
        if !c.is_zero() {
            out.push((s, lead.clone(), mid.clone(), c));
        }
    }
    out
}

pub fn near_multiples(
    query: &NearMultipleQuery,
    backend: &dyn ThueBackend,
    strategy: Strategy,
    height_bound: u64,
) -> Result<NearMultipleResult> {
    let spec = &query.spec;
    spec.check_recognizable()?;
    let mut finite = BTreeSet::new();
    let mut provenance = Provenance::Exact;
    let mut unresolved = Vec::new();
    let keep = |t: Integer, finite: &mut BTreeSet<Integer>| -> Result<()> {
        if recognize(spec, &t)?.is_some() {
            finite.insert(t);
        }
        Ok(())
    };

    for (s, ca, cb, cc) in curves(query) {
        let curve = BiquadraticCurve::new(ca, cb, cc)?;
        let branch = format!("{} curve {curve}", if s > 0 { "+4" } else { "-4" });
        let pts = solve_curve(&curve, backend, strategy, height_bound).map_err(|e| e.in_branch(branch.clone()))?;
        provenance = provenance.merge(&pts.provenance);
        unresolved.extend(pts.unresolved.iter().map(|u| (branch.clone(), format!("g = {}: {}", u.g, u.reason))));
        for (x, _) in &pts.points {
            keep(&query.a * x * x + &query.b, &mut finite)?;
        }
    }

    let mut family = None;
    if spec.kind == Kind::V && query.b.abs() == int(2) {
        keep(query.b.clone(), &mut finite)?;
        family = pell_family(query).map_err(|e| e.in_branch("Pell-Fermat branch"))?;
        if family.is_some() {
            // a value reached by the family is reported through it
            finite.retain(|t| !in_pell_branch(query, t));
        }
    }

    Ok(NearMultipleResult {
        query: query.clone(),
        finite_terms: finite,
        family,
        provenance,
        unresolved,
    })
}

/// Whether `t = a·x² + b` with `x ≠ 0` lifts to a Pell solution with `D | w·x`.
fn in_pell_branch(query: &NearMultipleQuery, t: &Integer) -> bool {
    let (a, b, d) = (&query.a, &query.b, &query.spec.d);
    let Some(x) = query.root(t).filter(|x| !x.is_zero()) else {
        return false;
    };
    exact_sqrt(&(d * a * a * &x * &x + int(2) * d * a * b)).is_some_and(|w| (w * &x).is_multiple_of(d))
}

/// Terms `a·x² + b` with `x ≠ 0` from `w² - D·a²·x² = 2Dab`, `u = w·x / D`.
/// The automorphism acts invertibly modulo `D`, so one passing solution
/// recurs along its orbit and the family is infinite.
fn pell_family(query: &NearMultipleQuery) -> Result<Option<Family>> {
    let (a, b, d) = (&query.a, &query.b, &query.spec.d);
    let pf = PellFermat::new(d * a * a, int(2) * d * a * b)?;
    let classes = solve_classes(&pf)?;
    if classes.representatives.is_empty() {
        return Ok(None);
    }
    let mut limit = int(1_000_000);
    let mut found: BTreeSet<(usize, Integer, Integer)> = BTreeSet::new();
    for _ in 0..40 {
        found.clear();
        for (w, x) in enumerate(&classes, &limit) {
            if !x.is_positive() || !(&w * &x).is_multiple_of(d) {
                continue;
            }
            let t = a * &x * &x + b;
            if let Some(n) = recognize(&query.spec, &t)? {
                found.insert((n, t, x));
            }
        }
        if found.len() >= FAMILY_TERMS + 2 {
            break;
        }
        limit = &limit * &limit;
    }
    if found.is_empty() {
        return Ok(None);
    }
    let terms: Vec<(usize, Integer, Integer)> = found.into_iter().take(FAMILY_TERMS).collect();
    for (n, t, m) in &terms {
        if query.spec.iter().nth(*n).as_ref() != Some(t) || &(a * m * m + b) != t {
            return Err(Error::Contract(format!("family term {t} at index {n} fails verification")));
        }
    }
    let residue = terms[0].0;
    let modulus = terms.windows(2).fold(0, |g, w| g.gcd(&(w[1].0 - w[0].0)));
    Ok(Some(Family {
        pell_d: pf.d,
        pell_n: pf.n,
        modulus,
        residue: if modulus == 0 { residue } else { residue % modulus },
        terms,
    }))
}

/// Terms with index `≤ max_index` of the form `a·m² + b`.
pub fn brute_force_scan(query: &NearMultipleQuery, max_index: usize) -> BTreeSet<Integer> {
    query.spec.iter().take(max_index + 1).filter(|t| query.root(t).is_some()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thue::BoundedBackend;

    fn spec(kind: Kind, p: i64, q: i64) -> LucasSpec {
        LucasSpec::from_i64(kind, p, q).unwrap()
    }

    fn query(kind: Kind, p: i64, q: i64, a: i64, b: i64) -> NearMultipleQuery {
        NearMultipleQuery::new(spec(kind, p, q), int(a), int(b)).unwrap()
    }

    fn run(q: &NearMultipleQuery) -> NearMultipleResult {
        near_multiples(q, &BoundedBackend::default(), Strategy::Auto, 10_000).unwrap()
    }

    fn set(v: &[i64]) -> BTreeSet<Integer> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn first_terms() {
        let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(terms(&spec(Kind::U, 1, -1), 8), ints(&[0, 1, 1, 2, 3, 5, 8, 13]));
        assert_eq!(terms(&spec(Kind::V, 1, -1), 6), ints(&[2, 1, 3, 4, 7, 11]));
        assert_eq!(terms(&spec(Kind::U, 2, -1), 6), ints(&[0, 1, 2, 5, 12, 29]));
        assert!(terms(&spec(Kind::U, 2, -1), 0).is_empty());
    }

    #[test]
    fn degenerate_specs() {
        assert!(LucasSpec::from_i64(Kind::U, 2, 1).is_err());
        assert!(LucasSpec::from_i64(Kind::U, 1, 1).is_err());
        assert!(LucasSpec::from_i64(Kind::U, 0, -1).is_err());
        assert!(LucasSpec::from_i64(Kind::U, 3, 2).is_err());
        let s = spec(Kind::U, 3, 1);
        let err = recognize(&s, &int(3)).unwrap_err();
        assert!(err.to_string().contains("(P,Q)=(3,1) unsupported"));
    }

    #[test]
    fn recognition() {
        assert_eq!(recognize(&spec(Kind::U, 1, -1), &int(5)).unwrap(), Some(5));
        assert_eq!(recognize(&spec(Kind::V, 1, -1), &int(7)).unwrap(), Some(4));
        assert_eq!(recognize(&spec(Kind::U, 1, -1), &int(4)).unwrap(), None);
        assert_eq!(recognize(&spec(Kind::U, 1, -1), &int(1)).unwrap(), Some(1));
        assert_eq!(recognize(&spec(Kind::U, 1, -1), &int(0)).unwrap(), Some(0));
        assert_eq!(recognize(&spec(Kind::V, 1, -1), &int(2)).unwrap(), Some(0));
        assert_eq!(recognize(&spec(Kind::V, 4, 1), &int(14)).unwrap(), Some(2));
    }

    #[test]
    fn recognition_matches_generation() {
        for (p, q) in [(1, -1), (2, -1), (3, -1), (5, 1)] {
            for kind in [Kind::U, Kind::V] {
                let s = spec(kind, p, q);
                let ts: Vec<Integer> = terms(&s, 40);
                let max = ts.last().unwrap().clone();
                for t in ts.iter() {
                    assert!(recognize(&s, t).unwrap().is_some(), "{s} {t}");
                }
                let mut x = Integer::zero();
                while x < max && x < int(5000) {
                    assert_eq!(recognize(&s, &x).unwrap().is_some(), ts.contains(&x), "{s} {x}");
                    x += 1u32;
                }
            }
        }
    }

    #[test]
    fn fibonacci_near_squares() {
        assert_eq!(run(&query(Kind::U, 1, -1, 1, -3)).finite_terms, set(&[1, 13, 1597]));
        assert_eq!(run(&query(Kind::U, 1, -1, 2, 2)).finite_terms, set(&[2, 34]));
        assert_eq!(run(&query(Kind::U, 2, -1, 1, 0)).finite_terms, set(&[0, 1, 169]));
    }

    #[test]
    fn lucas_families() {
        let r = run(&query(Kind::V, 1, -1, 1, -2));
        assert!(r.finite_terms.is_empty());
        let fam = r.family.as_ref().unwrap();
        assert_eq!(fam.label(Kind::V), "V_{4n}");
        assert_eq!(fam.terms.len(), FAMILY_TERMS);
        assert_eq!(r.to_string(), "V_{4n}");

        let r = run(&query(Kind::V, 1, -1, 1, 2));
        assert_eq!(r.to_string(), "2, 11 and V_{4n+2}");
    }

    #[test]
    fn scan() {
        assert_eq!(brute_force_scan(&query(Kind::U, 1, -1, 1, -3), 30), set(&[1, 13, 1597]));
        assert_eq!(brute_force_scan(&query(Kind::V, 2, -1, 3, 3), 30), set(&[6]));
        assert!(brute_force_scan(&query(Kind::U, 1, -1, 1, 0), 0).is_subset(&set(&[0])));
    }
}

//! Reducible quartic equations, by casework over divisor splits of the
//! right-hand side across the factors.

use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{search_box, Classification, Factorization, HomogeneousFactor, Provenance, SolutionSet, ThueEquation};
use crate::arith::{exact_div, exact_sqrt, signed_divisors, Integer};
use crate::error::{Error, Result};
use crate::pell::{enumerate, solve_classes, PellFermat};
use crate::roots::{integer_roots, trim};

struct Collector {
    pairs: BTreeSet<(Integer, Integer)>,
    exact: bool,
}

/// Solves an equation whose form factors over the rationals. Branches
/// with infinitely many solutions (lines, indefinite quadratics) are
/// enumerated inside `|m|, |n| ≤ bound` and make the result bounded.
pub fn solve_reducible(eq: &ThueEquation, bound: u64) -> Result<SolutionSet> {
    let Classification::Reducible(fact) = &eq.classification else {
        return Err(Error::Contract(format!("{eq} is not reducible")));
    };
    let mut col = Collector {
        pairs: BTreeSet::new(),
        exact: true,
    };
    let b = Integer::from(bound);
    if eq.rhs.is_zero() {
        for (f, _) in &fact.factors {
            if f.degree() == 1 {
                let (m, n) = primitive(f.coeffs[1].clone(), -f.coeffs[0].clone());
                col.pairs.insert((m, n));
            }
        }
    } else if let Some(target) = exact_div(&eq.rhs, &fact.unit) {
        solve_target(fact, &target, &b, &mut col)?;
    }
    let provenance = if col.exact {
        Provenance::Exact
    } else {
        Provenance::BoundedBy(b)
    };
    let pairs: Vec<_> = col.pairs.into_iter().filter(|(m, n)| eq.holds(m, n) && m.gcd(n).is_one()).collect();
    SolutionSet::verified(eq, pairs, provenance)
}

fn primitive(m: Integer, n: Integer) -> (Integer, Integer) {
    let g = m.gcd(&n);
    (m / &g, n / &g)
}

fn solve_target(fact: &Factorization, target: &Integer, bound: &Integer, col: &mut Collector) -> Result<()> {
    if let Some(i) = fact.factors.iter().position(|(f, _)| f.degree() == 1) {
        return linear_case(fact, i, target, bound, col);
    }
    match fact.factors.as_slice() {
        [(q1, 1), (q2, 1)] if q1.degree() == 2 && q2.degree() == 2 => {
            for d1 in signed_divisors(target)? {
                let d2 = target / &d1;
                // both conics vanish on d2·q1 - d1·q2 = 0
                let h: Vec<Integer> = (0..3).map(|k| &d2 * &q1.coeffs[k] - &d1 * &q2.coeffs[k]).collect();
                for (m, n) in projective_zeros(&h) {
                    for (m, n) in [(m.clone(), n.clone()), (-m, -n)] {
                        if q1.evaluate(&m, &n) == d1 && q2.evaluate(&m, &n) == d2 {
                            col.pairs.insert((m, n));
                        }
                    }
                }
            }
            Ok(())
        }
        [(q, 2)] if q.degree() == 2 => {
            if let Some(s) = exact_sqrt(target) {
                for v in [s.clone(), -s] {
                    quadratic_equals(q, &v, bound, col)?;
                }
            }
            Ok(())
        }
        _ => {
            // not produced by rational factorization of a quartic; keep it honest
            let form = super::QuarticForm::new(expand_to_quartic(fact)?)?;
            col.pairs.extend(search_box(&form, &(target * &fact.unit), bound.try_into().unwrap_or(u64::MAX)));
            col.exact = false;
            Ok(())
        }
    }
}

fn expand_to_quartic(fact: &Factorization) -> Result<[Integer; 5]> {
    let e = fact.expand();
    if e.len() != 5 {
        return Err(Error::Contract("factorization is not quartic".into()));
    }
    Ok([0, 1, 2, 3, 4].map(|i| e[i].clone()))
}

/// Primitive `(m, n)` with `h(m, n) = 0`, for a non-zero quadratic form `h`.
fn projective_zeros(h: &[Integer]) -> Vec<(Integer, Integer)> {
    let (a, b, c) = (&h[0], &h[1], &h[2]);
    let mut out = Vec::new();
    if a.is_zero() {
        if b.is_zero() && c.is_zero() {
            return out;
        }
        out.push((Integer::one(), Integer::zero()));
        if !b.is_zero() || !c.is_zero() {
            out.push(primitive(c.clone(), -b.clone()));
        }
        return out;
    }
    let disc = b * b - Integer::from(4) * a * c;
    if let Some(s) = exact_sqrt(&disc) {
        for r in [-b + &s, -b - &s] {
            out.push(primitive(r, Integer::from(2) * a));
        }
    }
    out
}

/// Coprime solutions of `l(m, n)^e · H(m, n) = target` where `l` is the
/// `i`-th factor, by parametrizing each line `l = δ`.
fn linear_case(fact: &Factorization, i: usize, target: &Integer, bound: &Integer, col: &mut Collector) -> Result<()> {
    let (l, e) = &fact.factors[i];
    let (a, b) = (&l.coeffs[0], &l.coeffs[1]);
    let eg = a.extended_gcd(b);
    let rest: Vec<(&HomogeneousFactor, u32)> = fact
        .factors
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, (f, k))| (f, *k))
        .collect();
    let filter_modulus = Integer::from(FILTER_PRIMES.iter().product::<u64>());
    let filters: Vec<LineFilter> =
        FILTER_PRIMES.iter().map(|&p| LineFilter::new(p, (&eg.x, &eg.y), (a, b), &rest)).collect();
    for delta in signed_divisors(target)? {
        let Some(rest_target) = exact_div(target, &delta.pow(*e)) else {
            continue;
        };
        let residue = |x: &Integer| -> u64 { x.mod_floor(&filter_modulus).try_into().expect("reduced") };
        let (dr, tr) = (residue(&delta), residue(&rest_target));
        if !filters.iter().all(|f| f.admits(dr, tr)) {
            continue;
        }
        // a·m + b·n = δ  ⇔  (m, n) = δ·(x₀, y₀) + t·(b, -a)
        let m_t = vec![&delta * &eg.x, b.clone()];
        let n_t = vec![&delta * &eg.y, -a.clone()];
        let mut poly = vec![Integer::one()];
        for (f, k) in &rest {
            let fp = substitute(f, &m_t, &n_t);
            for _ in 0..*k {
                poly = mul(&poly, &fp);
            }
        }
        poly[0] -= &rest_target;
        let poly = trim(poly);
        if poly.is_empty() {
            line_points(&m_t, &n_t, bound, col);
            continue;
        }
        for t in integer_roots(&poly) {
            col.pairs.insert((&m_t[0] + &m_t[1] * &t, &n_t[0] + &n_t[1] * &t));
        }
    }
    Ok(())
}

const FILTER_PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// Residues of the line data and the remaining factors modulo `p`.
struct LineFilter {
    p: u64,
    x0: u64,
    y0: u64,
    a: u64,
    b: u64,
    rest: Vec<(Vec<u64>, u32)>,
}

impl LineFilter {
    fn new(p: u64, eg: (&Integer, &Integer), l: (&Integer, &Integer), rest: &[(&HomogeneousFactor, u32)]) -> Self {
        let r = |x: &Integer| x.mod_floor(&Integer::from(p)).try_into().expect("reduced");
        LineFilter {
            p,
            x0: r(eg.0),
            y0: r(eg.1),
            a: r(l.0),
            b: r(l.1),
            rest: rest.iter().map(|(f, k)| (f.coeffs.iter().map(r).collect(), *k)).collect(),
        }
    }

    /// Whether some `t` mod `p` makes the remaining factors equal `target`
    /// on the line through `δ·(x₀, y₀)` with direction `(b, -a)`.
    /// `delta` and `target` are given modulo the product of the filter primes.
    fn admits(&self, delta: u64, target: u64) -> bool {
        let p = self.p;
        let (d, tg) = (delta % p, target % p);
        (0..p).any(|t| {
            let m = (d * self.x0 + t * self.b) % p;
            let n = (d * self.y0 + (p - self.a) * t) % p;
            let mut v = 1u64;
            for (f, k) in &self.rest {
                let deg = f.len() - 1;
                let fv = f.iter().enumerate().fold(0u64, |acc, (i, c)| {
                    (acc + c * pow_mod(m, (deg - i) as u32, p) % p * pow_mod(n, i as u32, p)) % p
                });
                v = v * pow_mod(fv, *k, p) % p;
            }
            v == tg
        })
    }
}

fn pow_mod(x: u64, e: u32, p: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * x % p)
}

/// Every point of a solution line inside the box.
fn line_points(m_t: &[Integer], n_t: &[Integer], bound: &Integer, col: &mut Collector) {
    col.exact = false;
    let (lo, hi) = t_range(&m_t[0], &m_t[1], bound)
        .into_iter()
        .chain(t_range(&n_t[0], &n_t[1], bound))
        .fold((None::<Integer>, None::<Integer>), |(lo, hi), (a, b)| {
            (
                Some(lo.map_or(a.clone(), |x: Integer| x.max(a))),
                Some(hi.map_or(b.clone(), |x: Integer| x.min(b))),
            )
        });
    let (Some(lo), Some(hi)) = (lo, hi) else { return };
    let mut t = lo;
    while t <= hi {
        col.pairs.insert((&m_t[0] + &m_t[1] * &t, &n_t[0] + &n_t[1] * &t));
        t += 1u32;
    }
}

/// `t` with `|c0 + c1·t| ≤ bound`; `None` when `c1 = 0` (no constraint).
fn t_range(c0: &Integer, c1: &Integer, bound: &Integer) -> Option<(Integer, Integer)> {
    if c1.is_zero() {
        return None;
    }
    let (x, y) = ((-bound - c0), (bound - c0));
    let (x, y) = if c1.is_positive() { (x, y) } else { (-y, -x) };
    let c = c1.abs();
    Some((x.div_ceil(&c), y.div_floor(&c)))
}

fn substitute(f: &HomogeneousFactor, m_t: &[Integer], n_t: &[Integer]) -> Vec<Integer> {
    let k = f.degree();
    let mut acc = vec![Integer::zero()];
    for (i, c) in f.coeffs.iter().enumerate() {
        let mut term = vec![c.clone()];
        for _ in 0..k - i {
            term = mul(&term, m_t);
        }
        for _ in 0..i {
            term = mul(&term, n_t);
        }
        acc = add(&acc, &term);
    }
    acc
}

fn mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

/// Coprime solutions of `q(m, n) = v` for an irreducible quadratic `q`.
fn quadratic_equals(q: &HomogeneousFactor, v: &Integer, bound: &Integer, col: &mut Collector) -> Result<()> {
    let (a, b, c) = (&q.coeffs[0], &q.coeffs[1], &q.coeffs[2]);
    let disc = b * b - Integer::from(4) * a * c;
    let four_av = Integer::from(4) * a * v;
    // (2a·m + b·n)² - disc·n² = 4a·v
    let push = |x: &Integer, n: &Integer, col: &mut Collector| {
        if let Some(m) = exact_div(&(x - b * n), &(Integer::from(2) * a)) {
            col.pairs.insert((m, n.clone()));
        }
    };
    if disc.is_negative() {
        let nd = -&disc;
        if !four_av.is_positive() {
            return Ok(());
        }
        let nmax = (&four_av / &nd).sqrt();
        let mut n = -nmax.clone();
        while n <= nmax {
            if let Some(x) = exact_sqrt(&(&four_av - &nd * &n * &n)) {
                push(&x, &n, col);
                push(&-x, &n, col);
            }
            n += 1u32;
        }
        return Ok(());
    }
    let classes = solve_classes(&PellFermat::new(disc, four_av)?)?;
    if !classes.infinite {
        return Ok(());
    }
    col.exact = false;
    let limit = (Integer::from(2) * a.abs() + b.abs()) * bound;
    for (x, n) in enumerate(&classes, &limit) {
        if let Some(m) = exact_div(&(&x - b * &n), &(Integer::from(2) * a)) {
            if m.abs() <= *bound && n.abs() <= *bound {
                col.pairs.insert((m, n));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::thue::QuarticForm;

    fn eq(c: [i64; 5], rhs: i64) -> ThueEquation {
        ThueEquation::new(QuarticForm::from_i64(c).unwrap(), int(rhs))
    }

    fn pairs(v: &[(i64, i64)]) -> BTreeSet<(Integer, Integer)> {
        v.iter().map(|&(m, n)| (int(m), int(n))).collect()
    }

    #[test]
    fn lines_of_zero() {
        let s = solve_reducible(&eq([1, 0, 0, 0, -1], 0), 100).unwrap();
        assert_eq!(s.pairs, pairs(&[(1, -1), (1, 1)]));
        assert!(s.provenance.is_exact());
    }

    #[test]
    fn difference_of_fourth_powers_is_one() {
        let s = solve_reducible(&eq([1, 0, 0, 0, -1], 1), 100).unwrap();
        assert_eq!(s.pairs, pairs(&[(1, 0)]));
        assert!(s.provenance.is_exact());
    }

    #[test]
    fn squared_pell_quadratic() {
        let s = solve_reducible(&eq([1, 0, -4, 0, 4], 4), 50).unwrap();
        assert!(s.pairs.contains(&(int(2), int(1))));
        assert!(!s.provenance.is_exact());
        let brute = search_box(&QuarticForm::from_i64([1, 0, -4, 0, 4]).unwrap(), &int(4), 50);
        assert_eq!(s.pairs, brute);
    }

    #[test]
    fn definite_square_is_exact() {
        // (m² + n²)² = 25
        let s = solve_reducible(&eq([1, 0, 2, 0, 1], 25), 100).unwrap();
        assert_eq!(s.pairs, pairs(&[(1, -2), (1, 2), (2, -1), (2, 1)]));
        assert!(s.provenance.is_exact());
    }

    #[test]
    fn rejects_irreducible() {
        assert!(solve_reducible(&eq([1, 4, -6, -4, 1], -4), 10).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn product(a: [i64; 3], b: [i64; 3]) -> [i64; 5] {
            [a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[1] * b[1] + a[2] * b[0], a[1] * b[2] + a[2] * b[1], a[2] * b[2]]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn casework_matches_box_search(
                a in proptest::array::uniform3(-4i64..4),
                b in proptest::array::uniform3(-4i64..4),
                rhs in -60i64..60,
            ) {
                let c = product(a, b);
                prop_assume!(c.iter().any(|x| *x != 0));
                let e = eq(c, rhs);
                prop_assume!(!e.is_irreducible());
                let bound = 60i64;
                let got: BTreeSet<_> = solve_reducible(&e, bound as u64)
                    .unwrap()
                    .pairs
                    .into_iter()
                    .filter(|(m, n)| m.abs() <= int(bound) && n.abs() <= int(bound))
                    .collect();
                prop_assert_eq!(got, search_box(&e.form, &e.rhs, bound as u64));
            }
        }
    }
}

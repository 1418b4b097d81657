//! Factorization of binary quartic forms over the rationals.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{Classification, QuarticForm};
use crate::arith::{exact_div, exact_sqrt, gcd_all, Integer};
use crate::roots::integer_roots;

/// Primitive homogeneous factor with coefficients of `m^k, m^(k-1)n, …, n^k`;
/// the first non-zero coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomogeneousFactor {
    pub coeffs: Vec<Integer>,
}

impl HomogeneousFactor {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn evaluate(&self, m: &Integer, n: &Integer) -> Integer {
        super::eval_homogeneous(&self.coeffs, m, n)
    }

    /// Splits off the content and sign, returning `(unit, factor)`.
    fn normalize(coeffs: Vec<Integer>) -> (Integer, HomogeneousFactor) {
        let mut g = gcd_all(coeffs.iter());
        if coeffs.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let coeffs = coeffs.iter().map(|c| c / &g).collect();
        (g, HomogeneousFactor { coeffs })
    }
}

impl fmt::Display for HomogeneousFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match (k - i, i) {
                (0, 0) => String::new(),
                (a, 0) => pow_str("m", a),
                (0, b) => pow_str("n", b),
                (a, b) => format!("{}{}", pow_str("m", a), pow_str("n", b)),
            };
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if !a.is_one() || mono.is_empty() {
                write!(f, "{a}")?;
            }
            write!(f, "{mono}")?;
            first = false;
        }
        Ok(())
    }
}

fn pow_str(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// `unit · ∏ factorᵉ`, factors distinct and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Integer,
    pub factors: Vec<(HomogeneousFactor, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Vec<Integer> {
        let mut acc = vec![self.unit.clone()];
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = poly_mul(&acc, &f.coeffs);
            }
        }
        acc
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.unit.is_one() {
            write!(f, "{}·", self.unit)?;
        }
        for (i, (fac, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "({fac})")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn poly_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of a high-first polynomial by `v·t - u`.
fn divide_linear(p: &[Integer], v: &Integer, u: &Integer) -> Option<Vec<Integer>> {
    let mut rem: Vec<Integer> = p.to_vec();
    let mut q = Vec::with_capacity(p.len() - 1);
    for i in 0..p.len() - 1 {
        let c = exact_div(&rem[i], v)?;
        rem[i + 1] += &c * u;
        q.push(c);
    }
    rem.last().is_some_and(Zero::is_zero).then_some(q)
}

/// A rational root `u/v` (coprime, `v > 0`) of a high-first polynomial with
/// non-zero leading coefficient, via integer roots of the monic transform.
fn rational_root(p: &[Integer]) -> Option<(Integer, Integer)> {
    let k = p.len() - 1;
    let lead = &p[0];
    // g(s) = lead^(k-1)·p(s/lead), lowest degree first
    let mut g = vec![Integer::zero(); k + 1];
    let mut lp = Integer::one();
    for i in 1..=k {
        g[k - i] = &p[i] * &lp;
        lp *= lead;
    }
    g[k] = Integer::one();
    let s = integer_roots(&g).into_iter().next()?;
    let d = s.gcd(lead);
    let (mut u, mut v) = (&s / &d, lead / &d);
    if v.is_negative() {
        u = -u;
        v = -v;
    }
    Some((u, v))
}

/// Splits a quartic without rational roots into two integer quadratics.
fn quadratic_split(p: &[Integer]) -> Option<(Vec<Integer>, Vec<Integer>)> {
    let lead = &p[0];
    let (a, b) = (p[1].clone(), &p[2] * lead);
    let c = &p[3] * lead * lead;
    let e = &p[4] * lead * lead * lead;
    // resolvent cubic, its roots include q + w for (s² + ps + q)(s² + rs + w)
    let resolvent = vec![
        -(&a * &a * &e - Integer::from(4) * &b * &e + &c * &c),
        &a * &c - Integer::from(4) * &e,
        -b.clone(),
        Integer::one(),
    ];
    for y in integer_roots(&resolvent) {
        let Some(root) = exact_sqrt(&(&y * &y - Integer::from(4) * &e)) else {
            continue;
        };
        let (q2, w2) = (&y - &root, &y + &root);
        if q2.is_odd() {
            continue;
        }
        let (q, w): (Integer, Integer) = (q2 / 2, w2 / 2);
        let candidates: Vec<(Integer, Integer)> = if q != w {
            match exact_div(&(&c - &a * &q), &(&w - &q)) {
                Some(pp) => vec![(pp.clone(), &a - pp)],
                None => vec![],
            }
        } else {
            let disc = &a * &a - Integer::from(4) * (&b - Integer::from(2) * &q);
            match exact_sqrt(&disc) {
                Some(sq) if (&a + &sq).is_even() => {
                    vec![((&a + &sq) / 2, (&a - &sq) / 2)]
                }
                _ => vec![],
            }
        };
        for (pp, r) in candidates {
            let f1 = [Integer::one(), pp.clone(), q.clone()];
            let f2 = [Integer::one(), r.clone(), w.clone()];
            let prod = poly_mul(&f1, &f2);
            if prod == [Integer::one(), a.clone(), b.clone(), c.clone(), e.clone()] {
                // undo s = lead·t
                let back = |f: &[Integer; 3]| vec![lead * lead, &f[1] * lead, f[2].clone()];
                return Some((back(&f1), back(&f2)));
            }
        }
    }
    None
}

fn factor_core(mut h: Vec<Integer>, out: &mut Vec<Vec<Integer>>) {
    while h.len() > 1 && h[0].is_zero() {
        out.push(vec![Integer::zero(), Integer::one()]);
        h.remove(0);
    }
    while h.len() > 1 && h.last().is_some_and(Zero::is_zero) {
        out.push(vec![Integer::one(), Integer::zero()]);
        h.pop();
    }
    while h.len() > 2 {
        let Some((u, v)) = rational_root(&h) else { break };
        match divide_linear(&h, &v, &u) {
            Some(q) => {
                out.push(vec![v, -u]);
                h = q;
            }
            None => break,
        }
    }
    if h.len() == 5 {
        if let Some((f1, f2)) = quadratic_split(&h) {
            out.push(f1);
            out.push(f2);
            return;
        }
    }
    out.push(h);
}

/// Full factorization over the rationals into primitive integer factors.
pub fn factorize_form(f: &QuarticForm) -> Factorization {
    let mut raw = Vec::new();
    factor_core(f.coeffs.to_vec(), &mut raw);
    let mut factors: Vec<(HomogeneousFactor, u32)> = Vec::new();
    for coeffs in raw {
        let (_, fac) = HomogeneousFactor::normalize(coeffs);
        if fac.degree() == 0 {
            continue;
        }
        match factors.iter_mut().find(|(g, _)| *g == fac) {
            Some((_, e)) => *e += 1,
            None => factors.push((fac, 1)),
        }
    }
    // the monic transforms scale the factors, so recover the unit by comparison
    let primitive = Factorization {
        unit: Integer::one(),
        factors: factors.clone(),
    }
    .expand();
    let unit = primitive
        .iter()
        .zip(f.coeffs.iter())
        .find(|(p, _)| !p.is_zero())
        .and_then(|(p, c)| exact_div(c, p))
        .unwrap_or_else(Integer::zero);
    factors.sort();
    Factorization { unit, factors }
}

pub fn classify(f: &QuarticForm) -> Classification {
    let fact = factorize_form(f);
    let irreducible = fact.factors.len() == 1 && fact.factors[0].1 == 1 && fact.factors[0].0.degree() == 4;
    if irreducible || fact.expand() != f.coeffs.to_vec() {
        Classification::Irreducible
    } else {
        Classification::Reducible(fact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn q(c: [i64; 5]) -> QuarticForm {
        QuarticForm::from_i64(c).unwrap()
    }

    fn factors_of(c: [i64; 5]) -> Factorization {
        match classify(&q(c)) {
            Classification::Reducible(f) => f,
            Classification::Irreducible => panic!("{c:?} classified irreducible"),
        }
    }

    fn hf(c: &[i64]) -> HomogeneousFactor {
        HomogeneousFactor {
            coeffs: c.iter().map(|&x| int(x)).collect(),
        }
    }

    #[test]
    fn ljunggren_form_is_irreducible() {
        assert_eq!(classify(&q([1, 4, -6, -4, 1])), Classification::Irreducible);
        assert_eq!(classify(&q([1, 0, 0, 0, 1])), Classification::Irreducible);
        assert_eq!(classify(&q([1, 0, 0, 0, -2])), Classification::Irreducible);
    }

    #[test]
    fn difference_of_fourth_powers() {
        let f = factors_of([1, 0, 0, 0, -1]);
        assert_eq!(f.unit, int(1));
        assert_eq!(
            f.factors,
            vec![(hf(&[1, -1]), 1), (hf(&[1, 0, 1]), 1), (hf(&[1, 1]), 1)]
        );
    }

    #[test]
    fn repeated_quadratic() {
        // (m² + n²)²
        let f = factors_of([1, 0, 2, 0, 1]);
        assert_eq!(f.factors, vec![(hf(&[1, 0, 1]), 2)]);
        // (m² - 2n²)²
        let f = factors_of([1, 0, -4, 0, 4]);
        assert_eq!(f.factors, vec![(hf(&[1, 0, -2]), 2)]);
    }

    #[test]
    fn two_distinct_quadratics_without_rational_roots() {
        // (m² - 2n²)(3m² + mn + 5n²)
        let f = factors_of([3, 1, -1, -2, -10]);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), q([3, 1, -1, -2, -10]).coeffs.to_vec());
    }

    #[test]
    fn axes_and_content() {
        // -6·m·n·(m² + n²)
        let f = factors_of([0, -6, 0, -6, 0]);
        assert_eq!(f.unit, int(-6));
        assert_eq!(f.factors.len(), 3);
        // linear times irreducible cubic: (2m - n)(m³ - 2n³)
        let f = factors_of([2, -1, 0, -4, 2]);
        assert_eq!(f.factors, vec![(hf(&[1, 0, 0, -2]), 1), (hf(&[2, -1]), 1)]);
    }

    #[test]
    fn display() {
        let f = factors_of([1, 0, 0, 0, -1]);
        assert_eq!(f.to_string(), "(m - n)·(m^2 + n^2)·(m + n)");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn products_are_reducible(a in proptest::array::uniform3(-6i64..6), b in proptest::array::uniform3(-6i64..6)) {
                prop_assume!(a.iter().any(|x| *x != 0) && b.iter().any(|x| *x != 0));
                let p = poly_mul(&a.map(int), &b.map(int));
                let f = QuarticForm::new([0, 1, 2, 3, 4].map(|i| p[i].clone())).unwrap();
                match classify(&f) {
                    Classification::Reducible(fact) => prop_assert_eq!(fact.expand(), p),
                    Classification::Irreducible => prop_assert!(false, "{:?} x {:?}", a, b),
                }
            }

            #[test]
            fn factorization_expands_back(c in proptest::array::uniform5(-20i64..20)) {
                prop_assume!(c.iter().any(|x| *x != 0));
                let f = QuarticForm::from_i64(c).unwrap();
                if let Classification::Reducible(fact) = classify(&f) {
                    prop_assert_eq!(fact.expand(), f.coeffs.to_vec());
                    prop_assert!(fact.factors.iter().all(|(g, _)| g.degree() < 4 || fact.factors.len() > 1 || fact.factors[0].1 > 1));
                }
            }
        }
    }
}

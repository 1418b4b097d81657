use biquad::arith::{int, Integer};
use biquad::biquad::{solve_curve, BiquadraticCurve, Strategy as Conic};
use biquad::forms::{gcd_bound, resultant, two_square_decompose, BinaryForm};
use biquad::lucas::{near_multiples, recognize, terms, Kind, LucasSpec, NearMultipleQuery};
use biquad::pell::{enumerate, solve_classes, PellFermat};
use biquad::ternary::{parametrize, TernaryForm};
use biquad::thue::{solve_bounded, BoundedBackend, QuarticForm, ThueEquation};
use num_integer::{Integer as _, Roots};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        ..ProptestConfig::default()
    }
}

fn form() -> impl Strategy<Value = BinaryForm> {
    (-20i64..=20, -20i64..=20, -20i64..=20).prop_map(|(a, b, c)| BinaryForm::from_i64(a, b, c))
}

fn coprime_pair(bound: i64) -> impl Strategy<Value = (i64, i64)> {
    (-bound..=bound, -bound..=bound).prop_filter("coprime", |(m, n)| m.gcd(n) == 1)
}

/// `(A·z0², B·z0², −(A·x0² + B·y0²))` vanishes at `(x0, y0, z0)`.
fn ternary_with_point() -> impl Strategy<Value = (TernaryForm, [Integer; 3])> {
    (-30i64..=30, -30i64..=30, -20i64..=20, -20i64..=20, 1i64..=20)
        .prop_filter("non-zero coefficients", |(a, b, x, y, _)| {
            *a != 0 && *b != 0 && a * x * x + b * y * y != 0
        })
        .prop_map(|(a, b, x, y, z)| {
            let t = TernaryForm::from_i64(a * z * z, b * z * z, -(a * x * x + b * y * y)).unwrap();
            (t, [int(x), int(y), int(z)])
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn parametrization_identity((t, base) in ternary_with_point(), (m, n) in coprime_pair(1000)) {
        let p = parametrize(&t, &base).unwrap();
        let sq = |f: &BinaryForm| f.mul(f);
        let (x2, y2, z2) = (sq(&p.px), sq(&p.py), sq(&p.pz));
        for i in 0..5 {
            prop_assert!((&t.a * &x2[i] + &t.b * &y2[i] + &t.c * &z2[i]).is_zero());
        }
        let [x, y, z] = p.point(&int(m), &int(n));
        prop_assert!(t.evaluate(&x, &y, &z).is_zero());
    }

    #[test]
    fn gcd_divides_bound(f in form(), g in form(), (m, n) in coprime_pair(1000)) {
        prop_assume!(!resultant(&f, &g).is_zero());
        let bound = gcd_bound(&f, &g).unwrap().gcd_bound;
        let (m, n) = (int(m), int(n));
        let d = f.evaluate(&m, &n).gcd(&g.evaluate(&m, &n));
        prop_assert!(bound.is_multiple_of(&d), "gcd {} does not divide {}", d, bound);
    }

    #[test]
    fn two_square_round_trip(f in form()) {
        prop_assume!(!f.discriminant().is_zero());
        let dec = two_square_decompose(&f).unwrap();
        prop_assert_eq!(dec.expand(), f.to_rational());
        prop_assert!(!dec.determinant().is_zero());
    }

    #[test]
    fn pell_enumeration_matches_box(d in 2i64..=60, n in -60i64..=60) {
        let r = d.sqrt();
        prop_assume!(r * r != d && n != 0);
        const L: i64 = 500;
        let classes = solve_classes(&PellFermat::new(int(d), int(n)).unwrap()).unwrap();
        let got = enumerate(&classes, &int(L));
        let mut expect = Vec::new();
        for x in -L..=L {
            let rem = x * x - n;
            if rem >= 0 && rem % d == 0 {
                let y = (rem / d).sqrt();
                if y * y == rem / d {
                    expect.push((int(x), int(y)));
                    if y != 0 {
                        expect.push((int(x), int(-y)));
                    }
                }
            }
        }
        expect.sort();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn thue_solutions_verify(c in prop::array::uniform5(-20i64..=20), rhs in -300i64..=300) {
        prop_assume!(c.iter().any(|v| *v != 0) && rhs != 0);
        let eq = ThueEquation::new(QuarticForm::from_i64(c).unwrap(), int(rhs));
        let sols = solve_bounded(&eq, 60).unwrap();
        for (m, n) in &sols.pairs {
            prop_assert!(eq.holds(m, n) && m.gcd(n) == int(1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn curve_points_verify(a in -12i64..=12, b in -12i64..=12, c in -12i64..=12) {
        let Ok(curve) = BiquadraticCurve::from_i64(a, b, c) else { return Ok(()) };
        let res = solve_curve(&curve, &BoundedBackend { bound: 300 }, Conic::Auto, 2000).unwrap();
        for (x, y) in &res.points {
            prop_assert_eq!(y * y, curve.evaluate(x));
            prop_assert!(!x.is_negative() && !y.is_negative());
        }
    }

    #[test]
    fn lucas_terms_verify(
        (kind, p, q) in prop_oneof![
            Just((Kind::U, 1i64, -1i64)), Just((Kind::V, 1, -1)), Just((Kind::U, 2, -1)), Just((Kind::V, 2, -1)),
            Just((Kind::U, 4, 1)), Just((Kind::V, 4, 1)), Just((Kind::U, 5, 1)), Just((Kind::V, 5, 1)),
        ],
        a in 1i64..=6,
        b in -8i64..=8,
    ) {
        let spec = LucasSpec::from_i64(kind, p, q).unwrap();
        let query = NearMultipleQuery::new(spec.clone(), int(a), int(b)).unwrap();
        let res = near_multiples(&query, &BoundedBackend { bound: 300 }, Conic::Auto, 2000).unwrap();
        for t in &res.finite_terms {
            let n = recognize(&spec, t).unwrap().unwrap();
            prop_assert_eq!(spec.iter().nth(n).unwrap(), t.clone());
            prop_assert!(query.root(t).is_some());
        }
        if let Some(f) = &res.family {
            for (n, t, m) in &f.terms {
                prop_assert_eq!(spec.iter().nth(*n).unwrap(), t.clone());
                prop_assert_eq!(&(int(a) * m * m + int(b)), t);
            }
        }
    }
}

#[test]
fn lucas_identity_up_to_index_100() {
    for (p, q) in [(1i64, -1i64), (2, -1), (3, -1), (5, 1)] {
        let u = terms(&LucasSpec::from_i64(Kind::U, p, q).unwrap(), 101);
        let v = terms(&LucasSpec::from_i64(Kind::V, p, q).unwrap(), 101);
        let d = int(p * p - 4 * q);
        let mut qn = int(1);
        for n in 0..=100 {
            assert_eq!(&v[n] * &v[n] - &d * &u[n] * &u[n], int(4) * &qn, "({p},{q}) n={n}");
            qn *= q;
        }
    }
}

#[test]
fn recognition_rejects_non_terms() {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(3);
    for (p, q) in [(1i64, -1i64), (2, -1), (3, -1), (5, 1)] {
        for kind in [Kind::U, Kind::V] {
            let spec = LucasSpec::from_i64(kind, p, q).unwrap();
            let ts = terms(&spec, 60);
            let max = ts.last().unwrap();
            for t in &ts {
                assert!(recognize(&spec, t).unwrap().is_some());
            }
            let mut rejected = 0;
            while rejected < 10_000 {
                let bytes: [u8; 24] = rng.gen();
                let t = Integer::from_bytes_be(num_bigint::Sign::Plus, &bytes) % (max + 1u32);
                if !ts.contains(&t) {
                    assert_eq!(recognize(&spec, &t).unwrap(), None, "{spec} {t}");
                    rejected += 1;
                }
            }
        }
    }
}

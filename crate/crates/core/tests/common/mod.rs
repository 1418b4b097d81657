#![allow(dead_code)]

use std::collections::BTreeSet;

use biquad::arith::{exact_sqrt, int, Integer};
use biquad::biquad::{solve_curve, BiquadraticCurve, Strategy};
use biquad::lucas::{brute_force_scan, near_multiples, Kind, LucasSpec, NearMultipleQuery, FAMILY_TERMS};
use biquad::thue::BoundedBackend;

/// Answers the two Thue equations the Ljunggren curve dispatches.
pub const LJUNGGREN_MOCK: &str = r#"read line
case "$line" in
  "1 4 -6 -4 1 -4") printf '1 -1\n1 1\n1 5\n5 -1\n' ;;
  "-2 8 12 -8 -2 -2") printf '0 1\n1 0\n2 3\n3 -2\n' ;;
  *) exit 3 ;;
esac"#;

/// Sequences in column order.
pub const SEQUENCES: [(Kind, i64, i64); 4] = [(Kind::U, 1, -1), (Kind::V, 1, -1), (Kind::U, 2, -1), (Kind::V, 2, -1)];

/// Terms of the form `a·m² + b`, one row per `(a, b)`, one cell per sequence.
pub const TABLE: [(i64, i64, [&str; 4]); 21] = [
    (1, 0, ["0, 1, 144", "1, 4", "0, 1, 169", "none"]),
    (1, 1, ["1, 2, 5", "1, 2", "1, 2, 5", "2, 82"]),
    (1, -1, ["0, 3, 8", "3", "0", "none"]),
    (1, 2, ["2, 3", "2, 11 and V_{4n+2}", "2", "2 and V_{4n+2}"]),
    (1, -2, ["2, 34", "V_{4n}", "2", "14 and V_{4n}"]),
    (1, 3, ["3", "3, 4, 7, 199", "12", "none"]),
    (1, -3, ["1, 13, 1597", "1", "1", "6"]),
    (2, 0, ["0, 2, 8", "2, 18", "0, 2", "2"]),
    (2, 1, ["1, 3", "1, 3", "1", "none"]),
    (2, -1, ["1", "1, 7, 199", "1", "none"]),
    (2, 2, ["2, 34", "2, 4", "2", "2 and V_{4n}"]),
    (2, -2, ["0", "none", "0, 70", "V_{4n+2}"]),
    (2, 3, ["3, 5, 21", "3, 11", "5", "none"]),
    (2, -3, ["5", "29, 47, 64079", "5, 29", "none"]),
    (3, 0, ["0, 3", "3", "0, 12", "none"]),
    (3, 1, ["1, 13", "1, 4, 76", "1", "none"]),
    (3, -1, ["2", "2, 11, 47", "2", "2"]),
    (3, 2, ["2, 5", "2, 29", "2, 5, 29", "2, 14"]),
    (3, -2, ["1", "1", "1", "none"]),
    (3, 3, ["3", "3", "none", "6"]),
    (3, -3, ["0, 144", "none", "0", "none"]),
];

pub struct Cell {
    pub query: NearMultipleQuery,
    pub finite: BTreeSet<Integer>,
    pub family: Option<String>,
    pub text: &'static str,
}

pub fn cells() -> Vec<Cell> {
    let mut out = Vec::new();
    for (a, b, row) in TABLE {
        for ((kind, p, q), text) in SEQUENCES.into_iter().zip(row) {
            let spec = LucasSpec::from_i64(kind, p, q).unwrap();
            let query = NearMultipleQuery::new(spec, int(a), int(b)).unwrap();
            let (finite_part, family) = match text.split_once(" and ") {
                Some((f, l)) => (f, Some(l.to_string())),
                None if text.starts_with("V_") => ("none", Some(text.to_string())),
                None => (text, None),
            };
            let finite = if finite_part == "none" {
                BTreeSet::new()
            } else {
                finite_part.split(", ").map(|t| t.parse::<Integer>().unwrap()).collect()
            };
            out.push(Cell {
                query,
                finite,
                family,
                text,
            });
        }
    }
    out
}

/// Cells that disagree with the table or with a scan up to `max_index`.
pub fn table_mismatches(max_index: usize) -> Vec<String> {
    let backend = BoundedBackend::default();
    let mut out = Vec::new();
    for cell in cells() {
        let r = match near_multiples(&cell.query, &backend, Strategy::Auto, 10_000) {
            Ok(r) => r,
            Err(e) => {
                out.push(format!("{}: {e}", cell.query));
                continue;
            }
        };
        let label = r.family.as_ref().map(|f| f.label(cell.query.spec.kind));
        if r.finite_terms != cell.finite || label != cell.family || r.to_string() != cell.text {
            out.push(format!("{}: got `{r}`, table `{}`", cell.query, cell.text));
        }
        if let Some(f) = &r.family {
            if f.terms.len() != FAMILY_TERMS {
                out.push(format!("{}: {} family terms", cell.query, f.terms.len()));
            }
        }
        if r.terms_up_to(max_index) != brute_force_scan(&cell.query, max_index) {
            out.push(format!("{}: disagrees with scan up to index {max_index}", cell.query));
        }
    }
    out
}

/// Guard-satisfying curves with every coefficient in `[-k, k]`.
pub fn small_curves(k: i64) -> Vec<BiquadraticCurve> {
    let mut out = Vec::new();
    for a in -k..=k {
        for b in -k..=k {
            for c in -k..=k {
                if let Ok(curve) = BiquadraticCurve::from_i64(a, b, c) {
                    out.push(curve);
                }
            }
        }
    }
    out
}

pub fn brute_points(curve: &BiquadraticCurve, max_x: i64) -> BTreeSet<(Integer, Integer)> {
    (0..=max_x)
        .filter_map(|x| {
            let x = int(x);
            exact_sqrt(&curve.evaluate(&x)).map(|y| (x, y))
        })
        .collect()
}

/// Curves whose solved points miss a brute-force point with `x ≤ max_x`,
/// fail to verify, or differ from the scan under exact provenance.
pub fn curve_oracle_mismatches(k: i64, max_x: i64) -> Vec<String> {
    let backend = BoundedBackend::default();
    let mut out = Vec::new();
    for curve in small_curves(k) {
        let got = match solve_curve(&curve, &backend, Strategy::Auto, 10_000) {
            Ok(g) => g,
            Err(e) => {
                out.push(format!("{curve}: {e}"));
                continue;
            }
        };
        let expect = brute_points(&curve, max_x);
        if !got.points.is_superset(&expect) {
            out.push(format!("{curve}: got {:?}, brute {:?}", got.points, expect));
        }
        if got.points.iter().any(|(x, y)| y * y != curve.evaluate(x)) {
            out.push(format!("{curve}: unverified point"));
        }
        if got.provenance.is_exact() && got.points != expect {
            out.push(format!("{curve}: exact result differs from scan"));
        }
    }
    out
}

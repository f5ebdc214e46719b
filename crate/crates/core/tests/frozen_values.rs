//! Values computed independently with Python `fractions` by enumerating every
//! word, projecting by prefix, and summing absolute differences.

use qdefinetti::{
    distance_report, extreme_vs_bernoulli_distance, upper_constant, QParam, Rational, Scalar,
};

fn q(s: &str) -> QParam<Rational> {
    QParam::parse(s).unwrap()
}

fn r(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

#[test]
fn distances_match_enumeration() {
    let half = q("1/2");
    let cases = [
        ((5, 2, 2), r(47, 620)),
        ((6, 3, 3), r(3473, 44640)),
        ((7, 7, 2), r(191, 4096)),
        ((4, 1, 2), r(1, 10)),
    ];
    for ((n, n1, k), expected) in cases {
        assert_eq!(
            extreme_vs_bernoulli_distance(n, n1, k, &half).unwrap(),
            expected
        );
    }
    assert_eq!(
        extreme_vs_bernoulli_distance(6, 3, 3, &q("1/3")).unwrap(),
        r(254827, 12349260)
    );
}

#[test]
fn upper_constants() {
    let expected = [
        (1, r(4, 1), r(3, 1)),
        (2, r(42, 1), r(30, 1)),
        (3, r(378, 1), r(2613, 8)),
    ];
    for (k, half, third) in expected {
        assert_eq!(upper_constant(k, &q("1/2")), half);
        assert_eq!(upper_constant(k, &q("1/3")), third);
    }
}

#[test]
fn float_mode_agrees_with_exact_mode() {
    for (n, n1, k) in [(5, 2, 2), (12, 6, 3), (20, 20, 1), (16, 3, 4)] {
        let exact = distance_report(n, n1, k, &q("1/3")).unwrap();
        let float = distance_report(n, n1, k, &QParam::<f64>::parse("1/3").unwrap()).unwrap();
        assert!(exact.distance.to_f64().close_to(&float.distance));
        assert!(exact.upper.to_f64().close_to(&float.upper));
        assert_eq!(exact.lower.is_some(), float.lower.is_some());
    }
}

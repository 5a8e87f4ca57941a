mod common;

use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;

use curvetree::io::{tree_from_json, tree_to_json, TreeJson};
use curvetree::pipeline::Analyzer;
use curvetree::poly::{parse_polynomial, Polynomial, Var};
use curvetree::reeb::{canonical_code, check_geodesic_monotonicity, CodeOptions};
use curvetree::trace::TraceConfig;

use common::gen::{brute_force_monotone, build, q, random_tree, rational, resultant_identity_holds, univariate};

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0u32..5, 0u32..5, -9i64..=9), 0..8).prop_map(|t| Polynomial::from_int_terms(&t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_additive_and_multiplicative(f in small_poly(), g in small_poly(), x in rational(), y in rational()) {
        let (fx, gx) = (f.evaluate_exact(&x, &y), g.evaluate_exact(&x, &y));
        prop_assert_eq!((&f + &g).evaluate_exact(&x, &y), &fx + &gx);
        prop_assert_eq!((&f * &g).evaluate_exact(&x, &y), fx * gx);
    }

    #[test]
    fn mixed_partials_commute(f in small_poly()) {
        prop_assert_eq!(f.partial(Var::X).partial(Var::Y), f.partial(Var::Y).partial(Var::X));
    }

    #[test]
    fn printing_is_a_parse_fixed_point(f in small_poly(), c in rational()) {
        let f = &f + &Polynomial::constant(c);
        let text = f.to_string();
        let back = parse_polynomial(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The resultant of `x - a(t)` and `y - b(t)` vanishes on the
    /// parametrised curve.
    #[test]
    fn resultant_eliminates_the_parameter(a in univariate(3), b in univariate(2), s in rational()) {
        prop_assert!(resultant_identity_holds(&a, &b, &s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn geodesic_check_agrees_with_brute_force(t in random_tree()) {
        let report = check_geodesic_monotonicity(&build(&t)).unwrap();
        let (ok, leaves) = brute_force_monotone(&t);
        prop_assert_eq!(report.monotone, ok);
        prop_assert_eq!(report.geodesics_checked, leaves);
        prop_assert_eq!(report.violation.is_some(), !ok);
    }

    #[test]
    fn tree_json_round_trips(t in random_tree()) {
        let tree = build(&t);
        let json = tree_to_json(&tree);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: TreeJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&parsed, &json);
        let back = tree_from_json(&parsed).unwrap();
        prop_assert_eq!(tree_to_json(&back), json);
        let opts = CodeOptions::default();
        prop_assert_eq!(canonical_code(&back, opts).unwrap(), canonical_code(&tree, opts).unwrap());
    }

    #[test]
    fn preorder_classes_rank_abscissas(t in random_tree()) {
        let tree = build(&t);
        let distinct: BTreeSet<i64> = t.xs.iter().map(|&x| x as i64).collect();
        for v in &tree.vertices {
            let rank = distinct.iter().filter(|&&d| (d as f64) < v.x).count();
            prop_assert_eq!(v.preorder_class, rank);
        }
    }
}

/// `f(x / l, y / l)`: its level curves are those of `f` scaled by `l`.
fn rescaled(f: &Polynomial, l: &BigRational) -> Polynomial {
    Polynomial::from_terms(f.terms().map(|(m, c)| {
        let s = (0..m.degree()).fold(q(1, 1), |acc, _| acc / l);
        (m.x, m.y, c * s)
    }))
}

#[test]
fn codes_are_invariant_under_uniform_rescaling() {
    let cases = [(common::CIRCLE, 0.01), (common::COSTE, 0.01), (common::PARABOLAS, 1e-5), (common::FORKS, 1e-3)];
    for (src, eps) in cases {
        let f = common::poly(src);
        let base = Analyzer::new(&f, &TraceConfig::default()).unwrap();
        let code = base.analyze_level(eps).unwrap().code;
        for (n, d) in [(1, 4), (1, 3), (2, 1), (5, 1)] {
            let l = q(n, d);
            let cfg = TraceConfig { nbhd_candidates: vec![base.nbhd.radius * n as f64 / d as f64], ..TraceConfig::default() };
            let a = Analyzer::new(&rescaled(&f, &l), &cfg).unwrap();
            let scaled = a.analyze_level(eps).unwrap();
            assert_eq!(scaled.code, code, "{src} eps={eps:e} scale {n}/{d}");
            assert!(scaled.validation.passed, "{src} scale {n}/{d}: {:?}", scaled.validation);
        }
    }
}

//! Cross-module invariants: parser round-trips, alternating-sum facts,
//! the inequality guarantees for qualifying function families, agreement
//! between the two superadditivity formulations, and consistency between
//! structural propagation and the numeric testers.

use altsum_core::{
    alt_sum, builtin_corpus, check_generalized, check_szego, pair_violation, parse, propagate,
    sample_sequences, search_violation, test_convexity, test_pairs, test_w_membership,
    witness_violation, AltSequence, FuncExpr, GridLayout, GridSpec, PairTest, Property,
    PropertyStatus, SearchConfig,
};
use proptest::prelude::*;

fn convex_members() -> Vec<FuncExpr> {
    vec![
        FuncExpr::XLogX,
        parse("exp() - id() - 1").unwrap(),
        FuncExpr::Power(1.5),
        parse("pow(2) + pow(4) + pow(6)").unwrap(),
    ]
}

fn convex_exprs() -> Vec<FuncExpr> {
    vec![
        FuncExpr::Exp,
        FuncExpr::XLogX,
        FuncExpr::Power(2.0),
        parse("pow(2) + pow(4) + pow(6)").unwrap(),
    ]
}

fn scale_factor() -> impl Strategy<Value = f64> {
    (-50.0f64..50.0).prop_filter("nonzero", |v| *v != 0.0)
}

fn leaf() -> impl Strategy<Value = FuncExpr> {
    prop_oneof![
        Just(FuncExpr::Identity),
        Just(FuncExpr::Floor),
        Just(FuncExpr::XLogX),
        Just(FuncExpr::Exp),
        (-100.0f64..100.0).prop_map(FuncExpr::Constant),
        (0.01f64..20.0).prop_map(FuncExpr::Power),
    ]
}

fn expr_tree() -> impl Strategy<Value = FuncExpr> {
    leaf().prop_recursive(5, 64, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FuncExpr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FuncExpr::product(a, b)),
            (scale_factor(), inner.clone())
                .prop_map(|(s, c)| FuncExpr::scale(s, c).expect("nonzero")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FuncExpr::compose(a, b)),
            prop::collection::vec(((-10.0f64..10.0), inner), 1..4)
                .prop_map(|p| FuncExpr::series(p).expect("within cap")),
        ]
    })
}

fn admissible(max_len: usize) -> impl Strategy<Value = AltSequence> {
    prop::collection::vec(0.0f64..10.0, 1..=max_len).prop_map(|mut v| {
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        AltSequence::new(v).unwrap()
    })
}

proptest! {
    #[test]
    fn parse_print_roundtrip(e in expr_tree()) {
        let text = e.to_string();
        let back = parse(&text);
        prop_assert_eq!(back.as_ref(), Ok(&e), "canonical text: {}", text);
    }

    #[test]
    fn alt_sum_stays_in_range(seq in admissible(9)) {
        let s = alt_sum(&seq);
        prop_assert!(s >= -1e-12, "alt sum {} below 0", s);
        prop_assert!(s <= seq.head() + 1e-12, "alt sum {} above head {}", s, seq.head());
    }

    #[test]
    fn odd_partial_sums_dominate_the_tail(seq in admissible(11)) {
        // S_{2k-1} >= a_{2k} >= a_{2k+1}
        let v = seq.values();
        let mut k = 1;
        while 2 * k < v.len() {
            let head = AltSequence::new(v[..2 * k - 1].to_vec()).unwrap();
            let s = alt_sum(&head);
            prop_assert!(s >= v[2 * k - 1] - 1e-12);
            prop_assert!(v[2 * k - 1] >= v[2 * k]);
            k += 1;
        }
    }

    #[test]
    fn szego_holds_for_convex_on_odd_lengths(seq in admissible(9)) {
        let values = seq.values();
        let odd = if values.len() % 2 == 0 {
            AltSequence::new(values[..values.len() - 1].to_vec()).unwrap()
        } else {
            seq
        };
        for e in convex_exprs() {
            let r = check_szego(&e, &odd).unwrap();
            prop_assert!(r.holds, "{e} margin {} on {:?}", r.margin, odd.values());
        }
    }

    #[test]
    fn generalized_holds_for_convex_members_any_length(seq in admissible(9)) {
        for e in convex_members() {
            let r = check_generalized(&e, &seq).unwrap();
            prop_assert!(r.holds, "{e} margin {} on {:?}", r.margin, seq.values());
        }
    }

    #[test]
    fn even_lengths_hold_for_convex_members(seq in admissible(8)) {
        let values = seq.values();
        if values.len() < 2 {
            return Ok(());
        }
        let even = if values.len() % 2 == 1 {
            AltSequence::new(values[..values.len() - 1].to_vec()).unwrap()
        } else {
            seq
        };
        for e in convex_members() {
            let r = check_generalized(&e, &even).unwrap();
            prop_assert!(r.holds, "{e} margin {} on {:?}", r.margin, even.values());
        }
    }

    #[test]
    fn identity_margin_is_zero(seq in admissible(9)) {
        let r = check_generalized(&FuncExpr::Identity, &seq).unwrap();
        prop_assert_eq!(r.margin, 0.0);
    }
}

/// Pairs `(x, y)` with `x ≥ y` over the axis.
fn upper_pairs(axis: &[f64]) -> Vec<(f64, f64)> {
    let mut pairs = Vec::new();
    for (i, &x) in axis.iter().enumerate() {
        for &y in &axis[..=i] {
            pairs.push((x, y));
        }
    }
    pairs
}

#[test]
fn condition_formulations_agree_on_closed_grids() {
    // uniform grids are closed under (u, v) -> (u+v, v) for u, v <= A/2
    let grid = GridSpec {
        layout: GridLayout::Uniform,
        points: 61,
        bound: 10.0,
        jitter_seed: 0,
    };
    let axis = grid.axis_points().unwrap();
    let half: Vec<f64> = axis.iter().copied().filter(|&x| x <= 5.0).collect();
    let cond2_pairs = upper_pairs(&half);
    let cond1_pairs: Vec<(f64, f64)> = cond2_pairs.iter().map(|&(u, v)| (u + v, v)).collect();

    for entry in builtin_corpus() {
        let v2 = test_pairs(&entry.expr, PairTest::Superadditivity, cond2_pairs.clone()).unwrap();
        let v1 = test_pairs(&entry.expr, PairTest::DifferenceBound, cond1_pairs.clone()).unwrap();
        assert_eq!(
            v2.status.is_refuted(),
            v1.status.is_refuted(),
            "{}: superadditive {:?} vs difference {:?}",
            entry.name,
            v2.status,
            v1.status
        );
        assert_eq!(v1.pairs_tested, v2.pairs_tested);
    }
}

#[test]
fn two_term_checks_agree_with_membership_tester() {
    // passing the generalized check on all pairs (x, y) is the same as
    // the membership tester finding no violation on those pairs
    let grid = GridSpec {
        points: 41,
        ..GridSpec::default()
    };
    let axis = grid.axis_points().unwrap();
    let pairs = upper_pairs(&axis);
    for entry in builtin_corpus() {
        let all_hold = pairs.iter().all(|&(x, y)| {
            check_generalized(&entry.expr, &AltSequence::new(vec![x, y]).unwrap())
                .map(|r| r.holds)
                .unwrap_or(false)
        });
        let verdict = test_pairs(&entry.expr, PairTest::DifferenceBound, pairs.clone()).unwrap();
        assert_eq!(
            all_hold,
            !verdict.status.is_refuted(),
            "{}: checks {} vs tester {:?}",
            entry.name,
            all_hold,
            verdict.status
        );
    }
}

#[test]
fn propagation_never_contradicts_the_grids() {
    let grid = GridSpec::default();
    for entry in builtin_corpus() {
        let ps = propagate(&entry.expr);
        let membership = test_w_membership(&entry.expr, &grid).unwrap();
        let convexity = test_convexity(&entry.expr, &grid).unwrap();
        if ps.in_w.is_proven() {
            assert!(
                !membership.status.is_refuted(),
                "{}: proven member refuted by grid",
                entry.name
            );
        }
        if ps.convex.is_proven() {
            assert!(
                !convexity.status.is_refuted(),
                "{}: proven convex refuted by grid",
                entry.name
            );
        }
        for verdict in [&membership, &convexity] {
            if let Some(w) = &verdict.witness {
                let (violation, tol) = verdict.reverify(&entry.expr).unwrap().unwrap();
                assert_eq!(violation, w.violation, "{}", entry.name);
                assert!(violation > tol, "{}", entry.name);
            }
        }
    }
}

#[test]
fn propagated_refutations_carry_sound_witnesses() {
    for entry in builtin_corpus() {
        let ps = propagate(&entry.expr);
        for prop in [
            Property::InW,
            Property::Convex,
            Property::Nonnegative,
            Property::Nondecreasing,
            Property::ZeroNonpositive,
        ] {
            if let PropertyStatus::Refuted { witness, violation } = ps.get(prop) {
                let (again, tol) = witness_violation(&entry.expr, prop, witness).unwrap();
                assert_eq!(again, *violation, "{} {:?}", entry.name, prop);
                assert!(again > tol, "{} {:?}", entry.name, prop);
            }
        }
    }
}

#[test]
fn members_have_nonpositive_origin_and_monotone_grids() {
    let grid = GridSpec::default();
    let axis = grid.axis_points().unwrap();
    for entry in builtin_corpus() {
        let ps = propagate(&entry.expr);
        if ps.in_w.is_proven() {
            let v0 = entry.expr.eval_at(0.0).unwrap();
            assert!(v0 <= 1e-9, "{}: f(0) = {}", entry.name, v0);
        }
        if ps.in_w.is_proven() && ps.nonnegative.is_proven() {
            for w in axis.windows(2) {
                let (fx, fy) = (
                    entry.expr.eval_at(w[0]).unwrap(),
                    entry.expr.eval_at(w[1]).unwrap(),
                );
                let tol = altsum_core::hybrid_tol(&[fx, fy]);
                assert!(
                    fy >= fx - tol,
                    "{}: decreasing step f({}) = {} -> f({}) = {}",
                    entry.name,
                    w[0],
                    fx,
                    w[1],
                    fy
                );
            }
        }
    }
}

#[test]
fn search_has_no_false_alarms_on_guaranteed_families() {
    let family = [
        FuncExpr::Power(1.5),
        FuncExpr::Power(2.0),
        FuncExpr::Power(3.0),
        FuncExpr::XLogX,
        parse("exp() - id() - 1").unwrap(),
        parse("pow(2) + pow(4) + pow(6)").unwrap(),
    ];
    for e in &family {
        for m in 2..=8 {
            let out = search_violation(e, &SearchConfig::with_seed(m, 17));
            assert!(!out.violated, "{e} m={m}: margin {}", out.best_margin);
        }
    }
}

#[test]
fn exp_respects_parity() {
    for m in [3, 5, 7] {
        let odd = search_violation(&FuncExpr::Exp, &SearchConfig::with_seed(m, 17));
        assert!(!odd.violated, "m={m} margin {}", odd.best_margin);
    }
    for m in [2, 4, 6, 8] {
        let even = search_violation(&FuncExpr::Exp, &SearchConfig::with_seed(m, 17));
        assert!(even.violated, "m={m} margin {}", even.best_margin);
    }
}

#[test]
fn membership_grid_pass_confirms_power_theorem() {
    // x^r - y^r >= (x - y)^r on grids, for integer and fractional r
    for r in [1.5, 2.0, 3.0, 7.3] {
        let v = test_w_membership(&FuncExpr::Power(r), &GridSpec::default()).unwrap();
        assert!(!v.status.is_refuted(), "r = {r}");
        // spot re-check one pair through the difference form
        let (viol, tol) =
            pair_violation(&FuncExpr::Power(r), PairTest::DifferenceBound, 7.5, 2.5).unwrap();
        assert!(viol <= tol, "r = {r}: {viol}");
    }
}

#[test]
fn samples_revalidate() {
    for seq in sample_sequences(6, 25, 10.0, 99) {
        assert!(AltSequence::new(seq.values().to_vec()).is_ok());
    }
}

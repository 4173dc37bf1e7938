use std::collections::BTreeSet;

use num_bigint::BigUint;

use pooltest_core::strategy::two_defect::{
    consistent_members, consistent_partners, consistent_count_bound, partner_count_bound,
};
use pooltest_core::verify::{defect_sets, verify_exhaustive};
use pooltest_core::{
    run_generic, worst_case_bound, BinaryCode, GenericStrategyConfig, Oracle, S2Params, Strategy,
    TwoDefectStrategy,
};

fn p0() -> TwoDefectStrategy {
    TwoDefectStrategy::new(S2Params::new(6, 2, 4, 2, 36).unwrap()).unwrap()
}

#[test]
fn p0_layer_weight_dichotomy() {
    let s = p0();
    for set in defect_sets(36, 2).unwrap() {
        let r = s.code().outcome_vector(&set).unwrap().with_layers(4).unwrap();
        let weights = r.layer_weights().unwrap();
        assert_eq!(r.is_zero(), set.is_empty(), "{set:?}");
        assert_eq!(
            !set.is_empty() && weights.iter().all(|&m| m == 2),
            set.len() == 1,
            "{set:?} {weights:?}"
        );
        if set.len() == 2 {
            assert!(weights.iter().any(|&m| m > 2));
        }
    }
}

#[test]
fn p0_split_layer_separates_the_pair_and_counts_respect_bounds() {
    let s = p0();
    let all: Vec<usize> = (0..36).collect();
    for set in defect_sets(36, 2).unwrap().into_iter().filter(|s| s.len() == 2) {
        let (a, b) = (set[0], set[1]);
        let r = s.code().outcome_vector(&set).unwrap().with_layers(4).unwrap();
        let weights = r.layer_weights().unwrap();
        let split = weights.iter().position(|&m| m > 2).unwrap();
        assert_ne!(s.symbol(a, split), s.symbol(b, split));

        let cbound = consistent_count_bound(2, &weights);
        let pbound = partner_count_bound(2, &weights);
        for (v, other) in [(a, b), (b, a)] {
            let class: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&j| s.symbol(j, split) == s.symbol(v, split))
                .collect();
            let consistent = consistent_members(s.code(), &r, &class);
            assert!(consistent.contains(&v));
            assert!(BigUint::from(consistent.len()) <= cbound);

            let other_class: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&j| s.symbol(j, split) == s.symbol(other, split))
                .collect();
            let partners = consistent_partners(s.code(), &r, v, &other_class);
            assert!(partners.contains(&other), "{set:?}");
            assert!(BigUint::from(partners.len()) <= pbound);
        }
    }
}

#[test]
fn p0_every_run_within_budget() {
    let s = p0();
    let bound = worst_case_bound(s.params()) as usize;
    for set in defect_sets(36, 2).unwrap() {
        let mut oracle = Oracle::new(36, 2, &set).unwrap();
        let report = s.run(&mut oracle).unwrap();
        assert_eq!(report.answer, set);
        assert_eq!(report.total, report.tests_per_stage.iter().sum::<usize>());
        assert!(report.total <= bound);
        assert!(report.tests_per_stage.len() <= 4);
        assert_eq!(oracle.transcript().stage_sizes(), report.tests_per_stage);
    }
}

#[test]
fn p0_singleton_seven_decodes_from_stage_one() {
    let mut oracle = Oracle::new(36, 2, &[6]).unwrap();
    let report = p0().run(&mut oracle).unwrap();
    assert_eq!(report.answer, [6]);
    assert_eq!(report.total, 8);
    assert_eq!(oracle.transcript().stage_count(), 1);
}

#[test]
fn truncated_outer_code() {
    // t = 30 < 6² uses the first 30 outer words
    let s = TwoDefectStrategy::new(S2Params::new(6, 2, 4, 2, 30).unwrap()).unwrap();
    let v = verify_exhaustive(&s, 2).unwrap();
    assert!(v.summary.all_correct);
    assert!(v.summary.worst_total as u64 <= worst_case_bound(s.params()));
}

#[test]
fn generic_sixteen_samples_three_defects() {
    let code = BinaryCode::random_constant_weight(10, 3, 16, 2016).unwrap();
    for flag in [false, true] {
        let config = GenericStrategyConfig::new(code.clone(), 3)
            .unwrap()
            .identify_all_at_stage3(flag);
        let v = verify_exhaustive(&config, 3).unwrap();
        assert_eq!(v.summary.sets, 697);
        assert!(v.summary.all_correct, "flag={flag}");
        assert!(v.summary.max_stages <= config.max_stages());
        assert!(v.outcomes.iter().all(|o| o.replayed));
    }
}

#[test]
fn generic_stage_budgets() {
    let code = BinaryCode::random_constant_weight(10, 3, 16, 2016).unwrap();
    let config = GenericStrategyConfig::new(code, 3).unwrap();
    for set in defect_sets(16, 3).unwrap().into_iter().filter(|s| !s.is_empty()) {
        let mut oracle = Oracle::new(16, 3, &set).unwrap();
        let report = run_generic(&config, &mut oracle).unwrap();
        let stages = oracle.transcript().stages();
        let positives = stages[1].outcomes.iter().filter(|&&o| o).count();
        assert_eq!(positives, set.len(), "{set:?}");
        let classes: BTreeSet<_> = stages[1].pools.iter().map(|p| p.len()).collect();
        assert!(!classes.is_empty());
        let log = pooltest_core::binomial::ceil_log2(report.searched_class_size) as usize;
        let stage3 = if log == 0 { 0 } else { stages[2].pools.len() };
        assert_eq!(stage3, log);
        assert!(report.stage4_candidates <= report.found_vertex_degree);
        assert_eq!(*report.tests_per_stage.last().unwrap(), report.stage4_candidates);
    }
}

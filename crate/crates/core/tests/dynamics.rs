mod common;

use common::{binary_boolean, tree_instance, BUDGET};
use landscape_core::dynamics::{
    encouragement_forest, gain, run_search, supports, verify_trace_properties, PolicyKind,
    SearchPolicy, Support, FOREST_MATCHES_DEFINITION,
};
use landscape_core::gen::{quadratic_path, quadratic_path_start};
use landscape_core::{Assignment, FitnessFunction, FitnessGraph, VcspInstance};
use proptest::prelude::*;

fn policy(k: u8, seed: u64) -> SearchPolicy {
    SearchPolicy::new(match k % 4 {
        0 => PolicyKind::Steepest,
        1 => PolicyKind::First,
        2 => PolicyKind::Random(seed),
        _ => PolicyKind::Worst,
    })
}

fn start_for(inst: &VcspInstance, bits: u64) -> Assignment {
    Assignment((0..inst.n()).map(|i| ((bits >> i) & 1) as usize).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tree_paths_stay_within_quadratic_bound(inst in tree_instance(10)) {
        let n = inst.n();
        let g = FitnessGraph::build(&inst, BUDGET).unwrap();
        prop_assert!(g.longest_improving_path().length <= n * (n - 1) / 2 + n);
    }

    #[test]
    fn traces_are_paths_in_the_fitness_graph(inst in binary_boolean(7), bits in any::<u64>(), k in any::<u8>(), seed in any::<u64>()) {
        let g = FitnessGraph::build(&inst, BUDGET).unwrap();
        let trace = run_search(&inst, &start_for(&inst, bits), policy(k, seed)).unwrap();
        for w in trace.assignments().windows(2) {
            prop_assert!(g.has_edge(g.space().encode(w[0].values()), g.space().encode(w[1].values())));
        }
        let end = g.space().encode(trace.last().values());
        prop_assert!(!trace.truncated);
        prop_assert_eq!(g.out_degree(end), 0);
    }

    #[test]
    fn support_implies_sign_dependence(inst in tree_instance(8), bits in any::<u64>(), k in any::<u8>(), seed in any::<u64>()) {
        let g = FitnessGraph::build(&inst, BUDGET).unwrap();
        let trace = run_search(&inst, &start_for(&inst, bits), policy(k, seed)).unwrap();
        for later in 0..trace.steps() {
            for earlier in 0..later {
                if supports(&inst, &trace, earlier, later).unwrap() != Support::None {
                    let (i, j) = (trace.flips()[later].var, trace.flips()[earlier].var);
                    prop_assert!(g.sign_depends(i, j).unwrap().is_some());
                }
            }
        }
        let forest = encouragement_forest(&inst, &trace).unwrap();
        let report = verify_trace_properties(&inst, &trace, &forest).unwrap();
        prop_assert!(report.check(FOREST_MATCHES_DEFINITION).unwrap().passed);
    }

    #[test]
    fn gain_is_antisymmetric(inst in binary_boolean(7), bits in any::<u64>(), i in 0usize..7) {
        let x = start_for(&inst, bits);
        let i = i % inst.n();
        prop_assert_eq!(gain(&inst, &x, i, 0).unwrap(), -gain(&inst, &x, i, 1).unwrap());
        let mut y = x.values().to_vec();
        y[i] = 1 - y[i];
        let expected = inst.fitness(&y) - inst.fitness(x.values());
        prop_assert_eq!(gain(&inst, &x, i, y[i]).unwrap(), expected);
    }

    #[test]
    fn random_policy_is_reproducible(inst in binary_boolean(7), bits in any::<u64>(), seed in any::<u64>()) {
        let x = start_for(&inst, bits);
        let p = SearchPolicy::new(PolicyKind::Random(seed));
        let a = run_search(&inst, &x, p).unwrap();
        let b = run_search(&inst, &x, p).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.seed, Some(seed));
    }
}

#[test]
fn quadratic_path_attains_the_bound() {
    for n in 2..=12 {
        let q = quadratic_path(n).unwrap();
        let g = FitnessGraph::build(&q, BUDGET).unwrap();
        assert_eq!(g.longest_improving_path().length, n * (n - 1) / 2 + n, "n = {n}");
        let worst = run_search(&q, &quadratic_path_start(n), SearchPolicy::new(PolicyKind::Worst)).unwrap();
        assert!(worst.steps() <= n * (n - 1) / 2 + n);
    }
}

#[test]
fn step_limit_truncates() {
    let q = quadratic_path(6).unwrap();
    let t = run_search(&q, &quadratic_path_start(6), SearchPolicy::new(PolicyKind::Worst).with_step_limit(3)).unwrap();
    assert_eq!(t.steps(), 3);
    assert!(t.truncated);
}

#[test]
fn gain_rejects_bad_arguments() {
    let q = quadratic_path(3).unwrap();
    let x = Assignment(vec![0, 0, 0]);
    assert!(gain(&q, &x, 3, 0).is_err());
    assert!(gain(&q, &x, 0, 2).is_err());
}

mod common;

use common::{any_instance, binary_boolean, BUDGET};
use landscape_core::gen::{quadratic_path, random_instance, Form, RandomSpec, Shape};
use landscape_core::span::{
    build_span_min_problem, minimize_span, solve_span_min, span, span_of_arity, SideRelation,
};
use landscape_core::{sign_equivalent, simplify, trim, Constraint, FitnessGraph, SimpleInstance, VcspInstance};
use proptest::prelude::*;

/// Smallest Σ|c| over simple instances with the signs of `t` (zero allowed)
/// and the same fitness graph, by enumeration up to `limit`.
fn brute_force_min_span(t: &SimpleInstance, limit: i64) -> Option<i64> {
    let target = FitnessGraph::build(t, BUDGET).unwrap();
    let unary: Vec<(usize, i64)> = t.unary().iter().map(|(&i, &c)| (i, c.signum())).collect();
    let binary: Vec<((usize, usize), i64)> = t.binary().iter().map(|(&e, &c)| (e, c.signum())).collect();
    let k = unary.len() + binary.len();
    for total in 0..=limit {
        let mut m = vec![0i64; k];
        // Enumerate compositions of `total` into k non-negative parts.
        loop {
            if m.iter().sum::<i64>() == total {
                let u = unary.iter().zip(&m).filter(|(_, &x)| x != 0).map(|(&(i, s), &x)| (i, s * x));
                let b = binary.iter().zip(&m[unary.len()..]).filter(|(_, &x)| x != 0).map(|(&(e, s), &x)| (e, s * x));
                let cand = SimpleInstance::new(t.n(), 0, u, b).unwrap();
                let g = FitnessGraph::build(&cand, BUDGET).unwrap();
                if g.first_edge_divergence(&target).unwrap().is_none() {
                    return Some(total);
                }
            }
            let mut pos = 0;
            loop {
                if pos == k {
                    break;
                }
                m[pos] += 1;
                if m.iter().sum::<i64>() <= total {
                    break;
                }
                m[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn improving_paths_are_bounded_by_span(inst in any_instance(6, 3)) {
        let g = FitnessGraph::build(&inst, BUDGET).unwrap();
        prop_assert!(g.longest_improving_path().length as i64 <= span(&inst));
    }

    #[test]
    fn simple_trim_form_is_within_factor_four(inst in binary_boolean(8)) {
        let simple = simplify(&inst).unwrap();
        let t = trim(&simple, BUDGET).unwrap();
        prop_assert!(t.span() <= 4 * span(&inst));
        prop_assert!(simple.unary_span() <= 2 * span(&inst));
        prop_assert!(simple.binary_span() <= 2 * span_of_arity(&inst, 2));
    }

    #[test]
    fn minimised_instances_keep_the_fitness_graph(inst in binary_boolean(7)) {
        let r = minimize_span(&inst, BUDGET).unwrap();
        prop_assert!(sign_equivalent(&inst, &r.minimized, BUDGET).unwrap().equal());
        prop_assert!(r.minimized_span <= r.trimmed_span);
        let g = FitnessGraph::build(&r.minimized, BUDGET).unwrap();
        prop_assert!(g.longest_improving_path().length as i64 <= r.minimized_span);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimisation_matches_exhaustive_search_on_small_instances(n in 2usize..=3, seed in any::<u64>(), cycle in any::<bool>()) {
        let shape = if cycle && n == 3 { Shape::Cycle } else { Shape::Path };
        let mut spec = RandomSpec::new(n, shape, seed);
        spec.form = Form::Simple;
        let inst = random_instance(&spec).unwrap();
        let r = minimize_span(&inst, BUDGET).unwrap();
        let t = trim(&simplify(&inst).unwrap(), BUDGET).unwrap();
        prop_assert_eq!(brute_force_min_span(&t, r.minimized_span), Some(r.minimized_span));
    }
}

#[test]
fn unary_powers_of_two() {
    let inst = VcspInstance::boolean(4, (0..4).map(|i| Constraint::unary(i, vec![0, 2 << i])).collect()).unwrap();
    assert_eq!(span(&inst), 30);
    let problem = build_span_min_problem(&simplify(&inst).unwrap()).unwrap();
    assert_eq!(problem.constraints.len(), 4);
    assert!(problem.constraints.iter().all(|c| c.relation == SideRelation::AtMost && c.offset == 1));
    assert_eq!(solve_span_min(&problem).unwrap().objective, 4);
    assert_eq!(minimize_span(&inst, BUDGET).unwrap().minimized_span, 4);
}

#[test]
fn quadratic_path_minimised_span() {
    let r = minimize_span(&quadratic_path(4).unwrap(), BUDGET).unwrap();
    assert!(r.minimized_span >= 10);
    assert_eq!(r.minimized_span, QUADRATIC_PATH_4_MIN_SPAN);
}

const QUADRATIC_PATH_4_MIN_SPAN: i64 = 22;

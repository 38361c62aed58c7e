mod common;

use std::collections::BTreeMap;

use common::{binary_boolean, BUDGET};
use landscape_core::{
    magnitude_equivalent, sign_equivalent, simplify, trim, trim_with_report, ConstraintGraph,
    Constraint, FitnessGraph, SimpleInstance, VcspInstance,
};
use proptest::prelude::*;

/// Same fitness function with separable tables added on extra pairs and
/// cancelled by unary terms.
fn reformulate(inst: &VcspInstance, pairs: &[(usize, usize, [i64; 4])]) -> VcspInstance {
    let mut tables: BTreeMap<Vec<usize>, Vec<i64>> = inst
        .constraints()
        .iter()
        .map(|c| (c.scope().to_vec(), c.values().to_vec()))
        .collect();
    for &(a, b, [u0, u1, v0, v1]) in pairs {
        let (i, j) = (a.min(b), a.max(b));
        if i == j {
            continue;
        }
        let t = tables.entry(vec![i, j]).or_insert_with(|| vec![0; 4]);
        for (k, add) in [u0 + v0, u0 + v1, u1 + v0, u1 + v1].into_iter().enumerate() {
            t[k] += add;
        }
        let ti = tables.entry(vec![i]).or_insert_with(|| vec![0; 2]);
        ti[0] -= u0;
        ti[1] -= u1;
        let tj = tables.entry(vec![j]).or_insert_with(|| vec![0; 2]);
        tj[0] -= v0;
        tj[1] -= v1;
    }
    let cs = tables.into_iter().map(|(s, v)| Constraint::new(s, v).unwrap()).collect();
    VcspInstance::boolean(inst.n(), cs).unwrap()
}

fn pairs() -> impl Strategy<Value = Vec<(usize, usize, [i64; 4])>> {
    prop::collection::vec((0usize..10, 0usize..10, prop::array::uniform4(-3i64..=3)), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn simple_form_is_magnitude_equivalent_and_minimal(inst in binary_boolean(8), extra in pairs()) {
        let simple = simplify(&inst).unwrap();
        prop_assert!(magnitude_equivalent(&inst, &simple, BUDGET).unwrap().equal());
        let extra: Vec<_> = extra.into_iter().map(|(a, b, t)| (a % inst.n(), b % inst.n(), t)).collect();
        let other = reformulate(&inst, &extra);
        prop_assert!(magnitude_equivalent(&inst, &other, BUDGET).unwrap().equal());
        let graph = ConstraintGraph::of_instance(&other).unwrap();
        for (i, j) in simple.edges() {
            prop_assert!(graph.has_edge(i, j));
        }
        prop_assert_eq!(simplify(&other).unwrap(), simple);
    }

    #[test]
    fn trim_keeps_the_fitness_graph_and_is_idempotent(inst in binary_boolean(8)) {
        let simple = simplify(&inst).unwrap();
        let report = trim_with_report(&simple, BUDGET).unwrap();
        prop_assert!(sign_equivalent(&inst, &report.instance, BUDGET).unwrap().equal());
        prop_assert_eq!(trim(&report.instance, BUDGET).unwrap(), report.instance.clone());
        // Kept edges carry a checkable sign-dependence witness.
        let g = FitnessGraph::build(&simple, BUDGET).unwrap();
        for d in &report.retained {
            prop_assert_eq!(g.sign_depends(d.dependent, d.on).unwrap().map(|w| w.witness), Some(d.witness.clone()));
        }
        for &(i, j) in &report.removed {
            prop_assert!(!g.sign_interact(i, j).unwrap());
        }
    }

    #[test]
    fn trimmed_edges_appear_in_every_sign_equivalent_instance(inst in binary_boolean(7), k in 2i64..5, extra in pairs()) {
        let t = trim(&simplify(&inst).unwrap(), BUDGET).unwrap();
        // Scaling plus a magnitude-equivalent reformulation keeps the fitness graph.
        let scaled = t.to_vcsp().scaled(k).unwrap();
        let extra: Vec<_> = extra.into_iter().map(|(a, b, w)| (a % inst.n(), b % inst.n(), w)).collect();
        let other = reformulate(&scaled, &extra);
        prop_assert!(sign_equivalent(&t, &other, BUDGET).unwrap().equal());
        let graph = ConstraintGraph::of_instance(&other).unwrap();
        for (i, j) in t.edges() {
            prop_assert!(graph.has_edge(i, j));
        }
    }

    #[test]
    fn weight_signs_agree_across_sign_equivalent_simple_instances(
        inst in binary_boolean(7),
        k in 2i64..6,
        pads in prop::collection::vec((0usize..7, 0usize..7, prop::bool::ANY), 1..4),
    ) {
        let t = trim(&simplify(&inst).unwrap(), BUDGET).unwrap();
        let n = t.n();
        let mut unary: BTreeMap<usize, i64> = t.unary().iter().map(|(&i, &c)| (i, k * c)).collect();
        let mut binary: BTreeMap<(usize, usize), i64> = t.binary().iter().map(|(&e, &c)| (e, k * c)).collect();
        for (a, b, positive) in pads {
            let (a, b) = (a % n, b % n);
            let w = if positive { 1 } else { -1 };
            if a == b {
                *unary.entry(a).or_default() += w;
            } else {
                *binary.entry((a.min(b), a.max(b))).or_default() += w;
            }
        }
        let padded = SimpleInstance::new(
            n,
            0,
            unary.into_iter().filter(|&(_, c)| c != 0),
            binary.into_iter().filter(|&(_, c)| c != 0),
        )
        .unwrap();
        prop_assume!(sign_equivalent(&t, &padded, BUDGET).unwrap().equal());
        for i in 0..n {
            prop_assert_eq!(t.unary_weight(i).signum(), padded.unary_weight(i).signum());
        }
        for (i, j) in t.edges() {
            prop_assert_eq!(t.binary_weight(i, j).signum(), padded.binary_weight(i, j).signum());
        }
    }
}

#[test]
fn xor_simplifies_to_opposing_weights() {
    let xor = VcspInstance::boolean(2, vec![Constraint::binary(0, 1, vec![0, 1, 1, 0]).unwrap()]).unwrap();
    let s = simplify(&xor).unwrap();
    assert_eq!((s.unary_weight(0), s.unary_weight(1), s.binary_weight(0, 1)), (1, 1, -2));
    assert_eq!(trim(&s, BUDGET).unwrap(), s);
}

#[test]
fn non_boolean_or_ternary_input_is_rejected() {
    let ternary = VcspInstance::new(vec![3, 2], Vec::new()).unwrap();
    assert_eq!(simplify(&ternary).unwrap_err().code(), "UNSUPPORTED_DOMAIN");
    let wide = VcspInstance::boolean(3, vec![Constraint::new(vec![0, 1, 2], vec![0; 8]).unwrap()]).unwrap();
    assert_eq!(simplify(&wide).unwrap_err().code(), "UNSUPPORTED_ARITY");
}

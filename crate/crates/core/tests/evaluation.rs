mod common;

use common::any_instance;
use landscape_core::{fitness_table, Assignment, AssignmentSpace, Constraint, FitnessFunction, VcspInstance};
use proptest::prelude::*;

/// Walks the table tuple by tuple, in row-major order, until the restriction
/// of `x` is found.
fn naive_value(c: &Constraint, domains: &[usize], x: &[usize]) -> i64 {
    let scope = c.scope();
    let mut tuple = vec![0usize; scope.len()];
    for &value in c.values() {
        if scope.iter().zip(&tuple).all(|(&v, &t)| x[v] == t) {
            return value;
        }
        for k in (0..tuple.len()).rev() {
            tuple[k] += 1;
            if tuple[k] < domains[scope[k]] {
                break;
            }
            tuple[k] = 0;
        }
    }
    unreachable!("every tuple appears in the table")
}

fn naive_fitness(inst: &VcspInstance, x: &[usize]) -> i64 {
    inst.constraints().iter().map(|c| naive_value(c, inst.domains(), x)).sum()
}

proptest! {
    #[test]
    fn evaluation_matches_tuple_by_tuple_lookup(inst in any_instance(6, 3)) {
        let space = AssignmentSpace::new(inst.domains(), 4096).unwrap();
        let table = fitness_table(&inst, &space);
        for (code, &v) in table.iter().enumerate() {
            let x = space.decode(code);
            prop_assert_eq!(v, naive_fitness(&inst, x.values()));
            prop_assert_eq!(inst.evaluate(&x).unwrap(), v);
        }
    }

    #[test]
    fn evaluation_is_linear_in_the_constraint_set(inst in any_instance(6, 3), split in any::<u64>()) {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (k, c) in inst.constraints().iter().enumerate() {
            if split >> (k % 64) & 1 == 1 { a.push(c.clone()) } else { b.push(c.clone()) }
        }
        let a = VcspInstance::new(inst.domains().to_vec(), a).unwrap();
        let b = VcspInstance::new(inst.domains().to_vec(), b).unwrap();
        let union = a.union(&b).unwrap();
        prop_assert_eq!(&union, &inst);
        let space = AssignmentSpace::new(inst.domains(), 4096).unwrap();
        for code in 0..space.len() {
            let x = space.decode(code);
            prop_assert_eq!(
                union.evaluate(&x).unwrap(),
                a.evaluate(&x).unwrap() + b.evaluate(&x).unwrap()
            );
        }
    }
}

#[test]
fn the_two_variable_example_table() {
    let inst = VcspInstance::boolean(
        2,
        vec![Constraint::nullary(1), Constraint::unary(0, vec![0, 1]), Constraint::unary(1, vec![0, 1])],
    )
    .unwrap();
    let table: Vec<i64> = ["00", "01", "10", "11"]
        .iter()
        .map(|s| inst.evaluate(&s.parse::<Assignment>().unwrap()).unwrap())
        .collect();
    assert_eq!(table, [1, 2, 2, 3]);
    let empty = VcspInstance::boolean(3, Vec::new()).unwrap();
    assert_eq!(empty.evaluate(&Assignment(vec![1, 0, 1])).unwrap(), 0);
}

#[test]
fn evaluation_rejects_bad_assignments() {
    let inst = VcspInstance::new(vec![2, 3], Vec::new()).unwrap();
    assert_eq!(inst.evaluate(&Assignment(vec![0])).unwrap_err().code(), "DIMENSION");
    assert_eq!(inst.evaluate(&Assignment(vec![0, 3])).unwrap_err().code(), "DOMAIN_VALUE");
}

#[test]
fn subset_sum_gadget_values() {
    // s = {3, 5, 7}, t = 8, S = {1, 2}.
    let g = landscape_core::gen::subsetsum_star(&[3, 5, 7], 8).unwrap();
    let e = |bits: &str| g.evaluate(&bits.parse().unwrap()).unwrap();
    assert_eq!(e("11001"), 1);
    assert_eq!(e("11011"), 4);
}

#![allow(dead_code)]

use landscape_core::gen::{random_instance, RandomSpec, Shape};
use landscape_core::{Constraint, VcspInstance};
use proptest::prelude::*;

/// Instances with domains 2..=3, arity at most `max_arity`, distinct scopes.
pub fn any_instance(max_n: usize, max_arity: usize) -> impl Strategy<Value = VcspInstance> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(2usize..=3, n),
                prop::collection::vec(
                    (prop::collection::vec(any::<bool>(), n), prop::collection::vec(-10i64..=10, 27)),
                    0..6,
                ),
            )
        })
        .prop_map(move |(domains, raw)| {
            let mut seen = Vec::new();
            let mut constraints = Vec::new();
            for (mask, values) in raw {
                let scope: Vec<usize> = mask
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| i)
                    .take(max_arity)
                    .collect();
                if seen.contains(&scope) {
                    continue;
                }
                let size: usize = scope.iter().map(|&v| domains[v]).product();
                constraints.push(Constraint::new(scope.clone(), values[..size].to_vec()).unwrap());
                seen.push(scope);
            }
            VcspInstance::new(domains, constraints).unwrap()
        })
}

/// Binary Boolean instances from the seeded generator.
pub fn binary_boolean(max_n: usize) -> impl Strategy<Value = VcspInstance> {
    (2..=max_n, 0u8..4, any::<u64>()).prop_map(|(n, shape, seed)| {
        let shape = match shape {
            0 => Shape::Tree,
            1 => Shape::Path,
            2 if n >= 3 => Shape::Cycle,
            _ => Shape::Random(0.4),
        };
        random_instance(&RandomSpec::new(n, shape, seed)).unwrap()
    })
}

pub fn tree_instance(max_n: usize) -> impl Strategy<Value = VcspInstance> {
    (2..=max_n, any::<u64>())
        .prop_map(|(n, seed)| random_instance(&RandomSpec::new(n, Shape::Tree, seed)).unwrap())
}

pub const BUDGET: usize = 1 << 16;

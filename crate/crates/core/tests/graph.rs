mod common;

use common::{any_instance, BUDGET};
use landscape_core::{FitnessFunction, FitnessGraph, VcspInstance};
use proptest::prelude::*;

/// Longest path by memoised depth-first search from every vertex.
fn dfs_longest(g: &FitnessGraph) -> usize {
    fn depth(g: &FitnessGraph, v: usize, memo: &mut [Option<usize>]) -> usize {
        if let Some(d) = memo[v] {
            return d;
        }
        let succ: Vec<usize> = g.out_neighbours(v).collect();
        let d = succ.into_iter().map(|w| 1 + depth(g, w, memo)).max().unwrap_or(0);
        memo[v] = Some(d);
        d
    }
    let mut memo = vec![None; g.vertex_count()];
    (0..g.vertex_count()).map(|v| depth(g, v, &mut memo)).max().unwrap_or(0)
}

fn small(max_vertices: usize) -> impl Strategy<Value = VcspInstance> {
    any_instance(6, 2).prop_filter("at most the vertex bound", move |i| {
        i.domains().iter().product::<usize>() <= max_vertices
    })
}

proptest! {
    #[test]
    fn edges_follow_the_fitness_order(inst in any_instance(6, 3)) {
        let g = FitnessGraph::build(&inst, BUDGET).unwrap();
        let order = g.topological_order();
        let mut rank = vec![0; order.len()];
        for (k, &v) in order.iter().enumerate() { rank[v] = k; }
        for v in 0..g.vertex_count() {
            for w in g.out_neighbours(v) {
                prop_assert!(rank[w] > rank[v]);
                prop_assert!(g.fitness(w) > g.fitness(v));
                prop_assert!(g.in_neighbours(w).any(|u| u == v));
            }
        }
    }

    #[test]
    fn dynamic_programme_matches_depth_first_search(inst in small(64)) {
        let g = FitnessGraph::build(&inst, BUDGET).unwrap();
        let path = g.longest_improving_path();
        prop_assert_eq!(path.length, dfs_longest(&g));
        prop_assert_eq!(path.witness.len(), path.length + 1);
        for w in path.witness.windows(2) {
            prop_assert!(g.has_edge(w[0], w[1]));
        }
    }
}

#[test]
fn local_optima_have_no_out_edges() {
    let q = landscape_core::gen::quadratic_path(4).unwrap();
    let g = FitnessGraph::build(&q, BUDGET).unwrap();
    let optima = g.local_optima();
    assert!(optima.iter().all(|&v| g.out_degree(v) == 0));
    assert!(optima.contains(&g.space().encode(&[1, 1, 1, 1])));
}

#[test]
fn vertex_budget_is_enforced() {
    let q = landscape_core::gen::quadratic_path(10).unwrap();
    let err = FitnessGraph::build(&q, 1000).unwrap_err();
    assert_eq!(err.code(), "SIZE_LIMIT");
    assert!(err.is_budget());
}

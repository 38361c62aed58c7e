//! Undirected constraint graphs and tree decompositions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{SimpleInstance, VcspInstance};

/// Graph on `[n]` with an edge for every binary constraint that is not
/// identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintGraph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl ConstraintGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .filter(|(a, b)| a != b)
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            adjacency,
            edges: set.into_iter().collect(),
        }
    }

    pub fn of_instance(instance: &VcspInstance) -> Result<Self> {
        let arity = instance.arity();
        if arity > 2 {
            return Err(Error::UnsupportedArity { arity });
        }
        Ok(Self::from_edges(
            instance.n(),
            instance
                .constraints()
                .iter()
                .filter(|c| c.arity() == 2 && !c.is_zero())
                .map(|c| (c.scope()[0], c.scope()[1])),
        ))
    }

    pub fn of_simple(instance: &SimpleInstance) -> Self {
        Self::from_edges(instance.n(), instance.edges())
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Component label per vertex; labels are the smallest vertex of each
    /// component.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut stack = Vec::new();
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = root;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = root;
                        stack.push(w);
                    }
                }
            }
        }
        label
    }

    pub fn component_count(&self) -> usize {
        let labels = self.components();
        labels.iter().enumerate().filter(|&(v, &l)| v == l).count()
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.n()
    }

    pub fn is_tree(&self) -> bool {
        self.is_forest() && self.component_count() == 1
    }

    /// True when `seq` visits distinct vertices joined by consecutive edges.
    pub fn is_simple_path(&self, seq: &[usize]) -> bool {
        let distinct: BTreeSet<usize> = seq.iter().copied().collect();
        distinct.len() == seq.len() && seq.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }
}

/// Bags of vertices joined in a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the decomposition against `graph` and returns its width.
    ///
    /// The bag tree must be a tree, every vertex and every edge must be
    /// covered by some bag, and the bags holding any vertex must form a
    /// connected subtree.
    pub fn validate(&self, graph: &ConstraintGraph) -> Result<usize> {
        let fail = |msg: alloc::string::String| Err(Error::Internal(msg));
        let k = self.bags.len();
        if k == 0 {
            return fail("tree decomposition has no bags".into());
        }
        let bag_tree = ConstraintGraph::from_edges(k, self.tree_edges.iter().copied());
        if bag_tree.edge_count() != self.tree_edges.len() || !bag_tree.is_tree() {
            return fail("bags are not joined in a tree".into());
        }
        for v in 0..graph.n() {
            let holding: Vec<usize> = (0..k).filter(|&b| self.bags[b].contains(&v)).collect();
            if holding.is_empty() {
                return fail(format!("vertex {} is in no bag", v + 1));
            }
            // Connectivity of the induced subtree.
            let induced = ConstraintGraph::from_edges(
                k,
                self.tree_edges
                    .iter()
                    .copied()
                    .filter(|(a, b)| holding.contains(a) && holding.contains(b)),
            );
            let labels = induced.components();
            if holding.iter().any(|&b| labels[b] != labels[holding[0]]) {
                return fail(format!("bags holding vertex {} are disconnected", v + 1));
            }
        }
        for &(a, b) in graph.edges() {
            if !self.bags.iter().any(|bag| bag.contains(&a) && bag.contains(&b)) {
                return fail(format!("edge {{{},{}}} is in no bag", a + 1, b + 1));
            }
        }
        Ok(self.width())
    }
}

//! Explicit fitness graphs over the 1-flip neighbourhood.
//!
//! Vertices are assignment codes: the mixed-radix number whose digits are
//! the variable values, variable 1 most significant. Only the fitness of
//! every vertex is stored; improving out-neighbours are recomputed on demand
//! from the codec, which keeps memory at one `i64` per vertex.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{require_boolean, Assignment, FitnessFunction};

/// Default vertex budget for exhaustive constructions (2^22).
pub const DEFAULT_MAX_VERTICES: usize = 1 << 22;

/// Index of an assignment in `0..V`.
pub type AssignmentCode = usize;

/// Mixed-radix codec for `D_1 × … × D_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentSpace {
    domains: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl AssignmentSpace {
    pub fn new(domains: &[usize], max_vertices: usize) -> Result<Self> {
        let required = domains
            .iter()
            .fold(1u128, |acc, &d| acc.saturating_mul(d as u128));
        if required > max_vertices as u128 {
            return Err(Error::SizeLimit {
                required,
                limit: max_vertices,
            });
        }
        let mut strides = vec![0; domains.len()];
        let mut stride = 1usize;
        for (k, &d) in domains.iter().enumerate().rev() {
            strides[k] = stride;
            stride *= d;
        }
        Ok(Self {
            domains: domains.to_vec(),
            strides,
            size: required as usize,
        })
    }

    pub fn domains(&self) -> &[usize] {
        &self.domains
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn stride(&self, var: usize) -> usize {
        self.strides[var]
    }

    pub fn encode(&self, x: &[usize]) -> AssignmentCode {
        x.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    pub fn decode_into(&self, code: AssignmentCode, out: &mut [usize]) {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.digit(code, k);
        }
    }

    pub fn decode(&self, code: AssignmentCode) -> Assignment {
        let mut x = vec![0; self.domains.len()];
        self.decode_into(code, &mut x);
        Assignment(x)
    }

    #[inline]
    pub fn digit(&self, code: AssignmentCode, var: usize) -> usize {
        (code / self.strides[var]) % self.domains[var]
    }

    /// Code of `x[var ↦ value]`.
    #[inline]
    pub fn with_digit(&self, code: AssignmentCode, var: usize, value: usize) -> AssignmentCode {
        let current = self.digit(code, var);
        code - current * self.strides[var] + value * self.strides[var]
    }

    /// All 1-flip neighbours of `code`, in (variable, value) order.
    pub fn neighbours(&self, code: AssignmentCode) -> impl Iterator<Item = AssignmentCode> + '_ {
        (0..self.domains.len()).flat_map(move |var| {
            let current = self.digit(code, var);
            (0..self.domains[var])
                .filter(move |&b| b != current)
                .map(move |b| self.with_digit(code, var, b))
        })
    }
}

/// Fitness of every point, computed by an odometer walk in code order.
pub fn fitness_table<F: FitnessFunction + ?Sized>(f: &F, space: &AssignmentSpace) -> Vec<i64> {
    let domains = space.domains();
    let mut x = vec![0usize; domains.len()];
    let mut out = Vec::with_capacity(space.len());
    for _ in 0..space.len() {
        out.push(f.fitness(&x));
        for k in (0..x.len()).rev() {
            x[k] += 1;
            if x[k] < domains[k] {
                break;
            }
            x[k] = 0;
        }
    }
    out
}

/// Directed graph of strictly improving 1-flip moves.
#[derive(Clone, Debug)]
pub struct FitnessGraph {
    space: AssignmentSpace,
    fitness: Vec<i64>,
}

/// Longest directed path and one witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongestPath {
    /// Number of edges.
    pub length: usize,
    pub witness: Vec<AssignmentCode>,
}

/// Witness for `i` sign-depending on `j`: the edge `x → x[i ↦ x̄_i]` exists
/// but `x[j ↦ x̄_j] → x[i ↦ x̄_i, j ↦ x̄_j]` does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignDependence {
    pub dependent: usize,
    pub on: usize,
    pub witness: Assignment,
}

impl FitnessGraph {
    pub fn build<F: FitnessFunction + ?Sized>(f: &F, max_vertices: usize) -> Result<Self> {
        let space = AssignmentSpace::new(f.domains(), max_vertices)?;
        let fitness = fitness_table(f, &space);
        Ok(Self { space, fitness })
    }

    pub fn space(&self) -> &AssignmentSpace {
        &self.space
    }

    pub fn vertex_count(&self) -> usize {
        self.space.len()
    }

    pub fn fitness(&self, code: AssignmentCode) -> i64 {
        self.fitness[code]
    }

    pub fn fitness_values(&self) -> &[i64] {
        &self.fitness
    }

    pub fn has_edge(&self, from: AssignmentCode, to: AssignmentCode) -> bool {
        self.fitness[to] > self.fitness[from] && self.space.neighbours(from).any(|y| y == to)
    }

    pub fn out_neighbours(&self, code: AssignmentCode) -> impl Iterator<Item = AssignmentCode> + '_ {
        let fx = self.fitness[code];
        self.space
            .neighbours(code)
            .filter(move |&y| self.fitness[y] > fx)
    }

    pub fn in_neighbours(&self, code: AssignmentCode) -> impl Iterator<Item = AssignmentCode> + '_ {
        let fx = self.fitness[code];
        self.space
            .neighbours(code)
            .filter(move |&y| self.fitness[y] < fx)
    }

    pub fn out_degree(&self, code: AssignmentCode) -> usize {
        self.out_neighbours(code).count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.out_degree(v)).sum()
    }

    /// Vertices with no improving neighbour, ascending.
    pub fn local_optima(&self) -> Vec<AssignmentCode> {
        (0..self.vertex_count())
            .filter(|&v| self.out_neighbours(v).next().is_none())
            .collect()
    }

    /// Vertices sorted by fitness, ties by code. Every edge goes forward in
    /// this order.
    pub fn topological_order(&self) -> Vec<AssignmentCode> {
        let mut order: Vec<AssignmentCode> = (0..self.vertex_count()).collect();
        order.sort_unstable_by_key(|&v| (self.fitness[v], v));
        order
    }

    /// Longest directed path by dynamic programming over the fitness order.
    ///
    /// Among equally long predecessors the smallest code wins, and the path
    /// ends at the smallest code of maximal depth.
    pub fn longest_improving_path(&self) -> LongestPath {
        let n = self.vertex_count();
        let mut depth = vec![0usize; n];
        let mut pred = vec![usize::MAX; n];
        for v in self.topological_order() {
            let mut best = 0usize;
            let mut best_pred = usize::MAX;
            for u in self.in_neighbours(v) {
                let d = depth[u] + 1;
                if d > best || (d == best && u < best_pred) {
                    best = d;
                    best_pred = u;
                }
            }
            depth[v] = best;
            pred[v] = best_pred;
        }
        let (mut end, mut length) = (0usize, 0usize);
        for (v, &d) in depth.iter().enumerate() {
            if d > length {
                length = d;
                end = v;
            }
        }
        let mut witness = vec![end];
        while pred[end] != usize::MAX {
            end = pred[end];
            witness.push(end);
        }
        witness.reverse();
        LongestPath { length, witness }
    }

    /// Exhaustive test of whether `i` sign-depends on `j`; the witness is the
    /// smallest qualifying assignment in code (lexicographic) order.
    pub fn sign_depends(&self, i: usize, j: usize) -> Result<Option<SignDependence>> {
        require_boolean(self.space.domains())?;
        let n = self.space.num_vars();
        if i >= n || j >= n {
            return Err(Error::ScopeRange {
                var: i.max(j),
                n,
            });
        }
        if i == j {
            return Err(Error::InvalidParameter(
                "sign dependence needs two distinct variables".into(),
            ));
        }
        let (si, sj) = (self.space.stride(i), self.space.stride(j));
        let f = &self.fitness;
        for x in 0..self.vertex_count() {
            let xi = x ^ si;
            let xj = x ^ sj;
            let xij = xi ^ sj;
            if f[xi] > f[x] && f[xij] <= f[xj] {
                return Ok(Some(SignDependence {
                    dependent: i,
                    on: j,
                    witness: self.space.decode(x),
                }));
            }
        }
        Ok(None)
    }

    pub fn sign_interact(&self, i: usize, j: usize) -> Result<bool> {
        Ok(self.sign_depends(i, j)?.is_some() || self.sign_depends(j, i)?.is_some())
    }

    /// Sign of every move `x → x[var ↦ value]`, compared against `other`.
    /// Returns the first move (in code, variable, value order) whose
    /// improving/non-improving status differs.
    pub fn first_edge_divergence(
        &self,
        other: &FitnessGraph,
    ) -> Result<Option<(AssignmentCode, usize, usize)>> {
        if self.space != other.space {
            return Err(Error::ShapeMismatch);
        }
        let domains = self.space.domains();
        for x in 0..self.vertex_count() {
            for (var, &d) in domains.iter().enumerate() {
                let cur = self.space.digit(x, var);
                for b in (0..d).filter(|&b| b != cur) {
                    let y = self.space.with_digit(x, var, b);
                    let mine = self.fitness[y] > self.fitness[x];
                    let theirs = other.fitness[y] > other.fitness[x];
                    if mine != theirs {
                        return Ok(Some((x, var, b)));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Builds the graph and tests sign dependence of `i` on `j`.
pub fn sign_depends<F: FitnessFunction + ?Sized>(
    f: &F,
    i: usize,
    j: usize,
    max_vertices: usize,
) -> Result<Option<SignDependence>> {
    require_boolean(f.domains())?;
    FitnessGraph::build(f, max_vertices)?.sign_depends(i, j)
}

pub fn sign_interact<F: FitnessFunction + ?Sized>(
    f: &F,
    i: usize,
    j: usize,
    max_vertices: usize,
) -> Result<bool> {
    require_boolean(f.domains())?;
    FitnessGraph::build(f, max_vertices)?.sign_interact(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Constraint, VcspInstance};

    #[test]
    fn codec_is_mixed_radix_first_variable_major() {
        let s = AssignmentSpace::new(&[2, 3, 2], 100).unwrap();
        assert_eq!(s.len(), 12);
        assert_eq!(s.encode(&[1, 2, 1]), 11);
        assert_eq!(s.decode(7).0, vec![1, 0, 1]);
        for code in 0..s.len() {
            assert_eq!(s.encode(&s.decode(code).0), code);
        }
        let nbrs: Vec<_> = s.neighbours(0).collect();
        assert_eq!(nbrs, vec![6, 2, 4, 1]);
    }

    #[test]
    fn budget_is_enforced_with_the_required_size() {
        let e = AssignmentSpace::new(&[2; 10], 1000).unwrap_err();
        assert_eq!(
            e,
            Error::SizeLimit {
                required: 1024,
                limit: 1000
            }
        );
    }

    #[test]
    fn single_unary_constraint_has_one_edge() {
        let inst = VcspInstance::boolean(1, vec![Constraint::unary(0, vec![0, 1])]).unwrap();
        let g = FitnessGraph::build(&inst, 16).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));
        assert!(!g.has_edge(1, 0));
        assert_eq!(g.local_optima(), vec![1]);
        assert_eq!(g.longest_improving_path().length, 1);
    }

    #[test]
    fn constant_fitness_has_no_edges() {
        let inst = VcspInstance::new(vec![3, 2], vec![Constraint::nullary(7)]).unwrap();
        let g = FitnessGraph::build(&inst, 16).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.local_optima().len(), 6);
        let lp = g.longest_improving_path();
        assert_eq!(lp.length, 0);
        assert_eq!(lp.witness, vec![0]);
    }

    #[test]
    fn all_ones_is_the_unique_optimum_of_positive_unaries() {
        let inst = VcspInstance::boolean(
            4,
            (0..4).map(|i| Constraint::unary(i, vec![0, 1])).collect(),
        )
        .unwrap();
        let g = FitnessGraph::build(&inst, 16).unwrap();
        assert_eq!(g.local_optima(), vec![15]);
        assert_eq!(g.longest_improving_path().length, 4);
    }

    #[test]
    fn unary_only_instance_has_no_sign_dependence() {
        let inst = VcspInstance::boolean(
            3,
            vec![
                Constraint::unary(0, vec![0, 3]),
                Constraint::unary(1, vec![2, -1]),
                Constraint::unary(2, vec![0, 1]),
            ],
        )
        .unwrap();
        let g = FitnessGraph::build(&inst, 64).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(g.sign_depends(i, j).unwrap().is_none());
                }
            }
        }
    }

    #[test]
    fn single_interaction_sign_interacts() {
        let inst =
            VcspInstance::boolean(2, vec![Constraint::binary(0, 1, vec![0, 0, 0, 5]).unwrap()])
                .unwrap();
        assert!(sign_interact(&inst, 0, 1, 16).unwrap());
        let dep = sign_depends(&inst, 0, 1, 16).unwrap().unwrap();
        // x = 01: flipping x_1 gains 5, but with x_2 flipped back it gains nothing.
        assert_eq!(dep.witness.0, vec![0, 1]);

        let zero =
            VcspInstance::boolean(2, vec![Constraint::binary(0, 1, vec![0, 0, 0, 0]).unwrap()])
                .unwrap();
        assert!(!sign_interact(&zero, 0, 1, 16).unwrap());
    }

    #[test]
    fn sign_tests_reject_non_boolean_domains() {
        let inst = VcspInstance::new(vec![3, 2], vec![]).unwrap();
        assert_eq!(
            sign_depends(&inst, 0, 1, 64).unwrap_err().code(),
            "UNSUPPORTED_DOMAIN"
        );
    }
}

//! Span of an instance and exact span minimisation.
//!
//! The span of a constraint is `max − min` over its table and the span of an
//! instance is the sum over its constraints. For a simple trim instance, every
//! sign-equivalent simple instance on the same constraint graph keeps all
//! weight signs, and its magnitudes satisfy one linear side constraint per
//! variable `i` and subset `Y` of the edges at `i`: the gain of flipping `x_i`
//! up while exactly the `Y`-neighbours are 1 keeps its sign. Minimising the
//! total magnitude over those constraints gives the smallest span in the
//! class.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::FitnessGraph;
use crate::ilp::{IntegerProgram, Relation, SolveOptions};
use crate::instance::{SimpleInstance, VcspInstance};
use crate::normal::{simplify, trim_with_report};

/// Largest number of incident weights for which all subsets are enumerated.
pub const MAX_SUBSET_DEGREE: usize = 20;

/// Value cap for problems with no known feasible point.
pub const HAND_BUILT_CAP: i64 = 1 << 16;

/// `Σ (max − min)` over all constraints.
pub fn span(instance: &VcspInstance) -> i64 {
    instance.constraints().iter().map(|c| c.span()).sum()
}

/// Span restricted to constraints of the given arity.
pub fn span_of_arity(instance: &VcspInstance, arity: usize) -> i64 {
    instance
        .constraints()
        .iter()
        .filter(|c| c.arity() == arity)
        .map(|c| c.span())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpanVariable {
    /// Magnitude of `c_i`.
    Unary(usize),
    /// Magnitude of `c_ij`, `i < j`.
    Binary(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideRelation {
    /// `≤_{+k}`
    AtMost,
    /// `=_{+k}`
    Equal,
}

/// `offset + Σ_{v∈left} p_v  (≤ | =)  Σ_{v∈right} p_v`; sides hold indices
/// into [`SpanMinProblem::variables`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSideConstraint {
    pub relation: SideRelation,
    pub offset: i64,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl LinearSideConstraint {
    pub fn is_satisfied(&self, values: &[i64]) -> bool {
        let l: i128 = self.offset as i128 + self.left.iter().map(|&v| values[v] as i128).sum::<i128>();
        let r: i128 = self.right.iter().map(|&v| values[v] as i128).sum();
        match self.relation {
            SideRelation::AtMost => l <= r,
            SideRelation::Equal => l == r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanMinProblem {
    pub variables: Vec<SpanVariable>,
    /// Sign of the source weight of each variable.
    pub positive: Vec<bool>,
    pub constraints: Vec<LinearSideConstraint>,
    /// `|c|` of the source instance, a feasible point; empty when built by
    /// hand.
    pub source_magnitudes: Vec<i64>,
}

impl SpanMinProblem {
    pub fn is_feasible(&self, values: &[i64]) -> bool {
        values.len() == self.variables.len()
            && values.iter().all(|&v| v >= 0)
            && self.constraints.iter().all(|c| c.is_satisfied(values))
    }

    fn index_of(&self, v: SpanVariable) -> Option<usize> {
        self.variables.binary_search(&v).ok()
    }
}

/// Builds the side constraints of `instance`, which should be simple and
/// trim. When `c_i` is absent it counts as zero and `p_i` is left out;
/// constraints with both sides empty and offset zero are dropped.
pub fn build_span_min_problem(instance: &SimpleInstance) -> Result<SpanMinProblem> {
    let n = instance.n();
    let mut variables: Vec<SpanVariable> = instance
        .unary()
        .keys()
        .map(|&i| SpanVariable::Unary(i))
        .chain(instance.edges().map(|(i, j)| SpanVariable::Binary(i, j)))
        .collect();
    variables.sort_unstable();
    let weight = |v: &SpanVariable| match *v {
        SpanVariable::Unary(i) => instance.unary_weight(i),
        SpanVariable::Binary(i, j) => instance.binary_weight(i, j),
    };
    let positive: Vec<bool> = variables.iter().map(|v| weight(v) > 0).collect();
    let source_magnitudes: Vec<i64> = variables.iter().map(|v| weight(v).abs()).collect();
    let mut problem = SpanMinProblem {
        variables,
        positive,
        constraints: Vec::new(),
        source_magnitudes,
    };

    for i in 0..n {
        let nbrs = instance.neighbours(i);
        if nbrs.len() > MAX_SUBSET_DEGREE {
            return Err(Error::DegreeLimit {
                var: i,
                degree: nbrs.len(),
                limit: MAX_SUBSET_DEGREE,
            });
        }
        let unary = problem.index_of(SpanVariable::Unary(i));
        let edges: Vec<usize> = nbrs
            .iter()
            .map(|&j| {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                problem
                    .index_of(SpanVariable::Binary(a, b))
                    .expect("every neighbour has an edge variable")
            })
            .collect();
        let ci = instance.unary_weight(i);
        for mask in 0u32..(1u32 << edges.len()) {
            let mut s = ci;
            let mut members: Vec<usize> = unary.into_iter().collect();
            for (k, &e) in edges.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    s += instance.binary_weight(i, nbrs[k]);
                    members.push(e);
                }
            }
            members.sort_unstable();
            let (pos, neg): (Vec<usize>, Vec<usize>) =
                members.into_iter().partition(|&v| problem.positive[v]);
            let c = match s.signum() {
                -1 => LinearSideConstraint {
                    relation: SideRelation::AtMost,
                    offset: 1,
                    left: pos,
                    right: neg,
                },
                0 => LinearSideConstraint {
                    relation: SideRelation::Equal,
                    offset: 0,
                    left: pos,
                    right: neg,
                },
                _ => LinearSideConstraint {
                    relation: SideRelation::AtMost,
                    offset: 1,
                    left: neg,
                    right: pos,
                },
            };
            let vacuous = c.offset == 0 && c.left.is_empty() && c.right.is_empty();
            if !vacuous {
                problem.constraints.push(c);
            }
        }
    }
    Ok(problem)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanMinSolution {
    pub values: Vec<i64>,
    pub objective: i64,
    pub nodes: u64,
}

pub fn solve_span_min(problem: &SpanMinProblem) -> Result<SpanMinSolution> {
    solve_span_min_with_limit(problem, None)
}

/// Exact minimum of `Σ p_v`. Search order and tie-breaking are fixed, so the
/// returned optimum is the same on every run.
pub fn solve_span_min_with_limit(
    problem: &SpanMinProblem,
    node_limit: Option<u64>,
) -> Result<SpanMinSolution> {
    let nv = problem.variables.len();
    let source_known = problem.source_magnitudes.len() == nv && problem.is_feasible(&problem.source_magnitudes);
    let cap = if source_known {
        problem.source_magnitudes.iter().sum::<i64>()
    } else {
        HAND_BUILT_CAP
    };
    let mut ip = IntegerProgram::new();
    for _ in 0..nv {
        ip.add_variable(0, cap, 1);
    }
    for c in &problem.constraints {
        // offset + Σ left − Σ right (≤ | =) 0
        let terms = c
            .left
            .iter()
            .map(|&v| (v, 1))
            .chain(c.right.iter().map(|&v| (v, -1)));
        let relation = match c.relation {
            SideRelation::AtMost => Relation::LessEq,
            SideRelation::Equal => Relation::Equal,
        };
        ip.add_row(terms, relation, -c.offset);
    }
    let options = SolveOptions {
        incumbent: source_known.then(|| problem.source_magnitudes.clone()),
        node_limit,
    };
    let s = ip.solve(&options)?;
    Ok(SpanMinSolution {
        values: s.values,
        objective: s.objective,
        nodes: s.nodes,
    })
}

/// Outcome of the simplify → trim → minimise pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizeReport {
    pub original_span: i64,
    pub simplified_span: i64,
    pub trimmed_span: i64,
    pub minimized: SimpleInstance,
    pub minimized_span: i64,
    pub removed_edges: Vec<(usize, usize)>,
    pub nodes: u64,
}

pub fn minimize_span(instance: &VcspInstance, max_vertices: usize) -> Result<MinimizeReport> {
    let simple = simplify(instance)?;
    let trimmed = trim_with_report(&simple, max_vertices)?;
    let problem = build_span_min_problem(&trimmed.instance)?;
    let solution = solve_span_min(&problem)?;
    let mut unary = Vec::new();
    let mut binary = Vec::new();
    for (v, &m) in problem.variables.iter().zip(&solution.values) {
        match *v {
            SpanVariable::Unary(i) => unary.push((i, m)),
            SpanVariable::Binary(i, j) => binary.push(((i, j), m)),
        }
    }
    let minimized = trimmed.instance.with_magnitudes(unary, binary)?;
    let before = FitnessGraph::build(&trimmed.instance, max_vertices)?;
    let after = FitnessGraph::build(&minimized, max_vertices)?;
    if let Some((x, var, _)) = before.first_edge_divergence(&after)? {
        return Err(Error::Internal(alloc::format!(
            "minimised weights change the move of variable {} at {}",
            var + 1,
            before.space().decode(x)
        )));
    }
    Ok(MinimizeReport {
        original_span: span(instance),
        simplified_span: simple.span(),
        trimmed_span: trimmed.instance.span(),
        minimized_span: minimized.span(),
        minimized,
        removed_edges: trimmed.removed,
        nodes: solution.nodes,
    })
}

/// Validated constructor for a problem not derived from an instance. Its
/// search box is `0..=HAND_BUILT_CAP` per variable.
pub fn hand_built_problem(
    variables: Vec<SpanVariable>,
    positive: Vec<bool>,
    constraints: Vec<LinearSideConstraint>,
) -> Result<SpanMinProblem> {
    let nv = variables.len();
    if positive.len() != nv {
        return Err(Error::InvalidParameter(
            "one sign per span variable is required".into(),
        ));
    }
    if constraints
        .iter()
        .flat_map(|c| c.left.iter().chain(&c.right))
        .any(|&v| v >= nv)
    {
        return Err(Error::InvalidParameter(
            "side constraint refers to an unknown variable".into(),
        ));
    }
    let mut sorted = variables.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted != variables {
        return Err(Error::InvalidParameter(
            "span variables must be sorted and distinct".into(),
        ));
    }
    Ok(SpanMinProblem {
        variables,
        positive,
        constraints,
        source_magnitudes: vec![],
    })
}

//! Exact branch-and-bound for small bounded integer programs.
//!
//! Minimises `Σ cost_k x_k` subject to linear rows `Σ a_k x_k ≤ b` or `= b`
//! and per-variable bounds. Search is depth-first with bounds-consistency
//! propagation at every node; variables are branched in decreasing order of
//! the number of rows they occur in (ties by index) and values are tried in
//! ascending order. The objective bound is itself a propagated row, so a node
//! whose cheapest completion cannot beat the incumbent is pruned.
//!
//! The returned optimum is the first optimal assignment met in that search
//! order, which makes the result independent of any supplied incumbent.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub terms: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerProgram {
    lower: Vec<i64>,
    upper: Vec<i64>,
    cost: Vec<i64>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// A known feasible point; its objective seeds the pruning bound.
    pub incumbent: Option<Vec<i64>>,
    /// Give up with `NODE_LIMIT` after this many nodes.
    pub node_limit: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpSolution {
    pub values: Vec<i64>,
    pub objective: i64,
    /// Search nodes expanded.
    pub nodes: u64,
}

/// `Σ a_k x_k ≤ b` in the internal representation.
#[derive(Clone, Debug)]
struct Inequality {
    terms: Vec<(usize, i128)>,
    rhs: i128,
}

impl IntegerProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, lower: i64, upper: i64, cost: i64) -> usize {
        self.lower.push(lower);
        self.upper.push(upper);
        self.cost.push(cost);
        self.lower.len() - 1
    }

    /// Adds a row; repeated variables are merged and zero coefficients
    /// dropped.
    pub fn add_row(&mut self, terms: impl IntoIterator<Item = (usize, i64)>, relation: Relation, rhs: i64) {
        let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
        for (k, a) in terms {
            *merged.entry(k).or_default() += a;
        }
        self.rows.push(Row {
            terms: merged.into_iter().filter(|&(_, a)| a != 0).collect(),
            relation,
            rhs,
        });
    }

    pub fn num_variables(&self) -> usize {
        self.cost.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self, values: &[i64]) -> i128 {
        values
            .iter()
            .zip(&self.cost)
            .map(|(&x, &c)| x as i128 * c as i128)
            .sum()
    }

    pub fn is_feasible(&self, values: &[i64]) -> bool {
        if values.len() != self.num_variables() {
            return false;
        }
        let in_bounds = values
            .iter()
            .enumerate()
            .all(|(k, &x)| self.lower[k] <= x && x <= self.upper[k]);
        in_bounds
            && self.rows.iter().all(|r| {
                let lhs: i128 = r.terms.iter().map(|&(k, a)| a as i128 * values[k] as i128).sum();
                match r.relation {
                    Relation::LessEq => lhs <= r.rhs as i128,
                    Relation::Equal => lhs == r.rhs as i128,
                }
            })
    }

    fn inequalities(&self) -> Vec<Inequality> {
        let mut out = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let pos: Vec<(usize, i128)> = r.terms.iter().map(|&(k, a)| (k, a as i128)).collect();
            if r.relation == Relation::Equal {
                out.push(Inequality {
                    terms: pos.iter().map(|&(k, a)| (k, -a)).collect(),
                    rhs: -(r.rhs as i128),
                });
            }
            out.push(Inequality {
                terms: pos,
                rhs: r.rhs as i128,
            });
        }
        out
    }

    pub fn solve(&self, options: &SolveOptions) -> Result<IlpSolution> {
        let n = self.num_variables();
        if (0..n).any(|k| self.lower[k] > self.upper[k]) {
            return Err(Error::Infeasible);
        }
        let mut rows = self.inequalities();
        // The objective row is last; its right-hand side tracks the bound.
        let objective_row = rows.len();
        rows.push(Inequality {
            terms: (0..n)
                .filter(|&k| self.cost[k] != 0)
                .map(|k| (k, self.cost[k] as i128))
                .collect(),
            rhs: i128::MAX / 4,
        });
        let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            for &(k, _) in &row.terms {
                occurs[k].push(r);
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&k| (core::cmp::Reverse(occurs[k].len()), k));

        let mut best: Option<(Vec<i64>, i128)> = None;
        if let Some(x) = &options.incumbent {
            if !self.is_feasible(x) {
                return Err(Error::Internal("supplied incumbent is infeasible".into()));
            }
            // Ties with an external incumbent are still explored, so the
            // search result does not depend on it.
            rows[objective_row].rhs = self.objective(x);
            best = Some((x.clone(), self.objective(x)));
        }

        let root = Bounds {
            lower: self.lower.iter().map(|&v| v as i128).collect(),
            upper: self.upper.iter().map(|&v| v as i128).collect(),
        };
        let mut stack: Vec<(Bounds, Option<usize>)> = vec![(root, None)];
        let mut nodes = 0u64;
        while let Some((mut b, branched)) = stack.pop() {
            nodes += 1;
            if let Some(limit) = options.node_limit {
                if nodes > limit {
                    return Err(Error::NodeLimit(limit));
                }
            }
            let seed: Vec<usize> = match branched {
                None => (0..rows.len()).collect(),
                Some(k) => {
                    let mut s = occurs[k].clone();
                    s.push(objective_row);
                    s
                }
            };
            if !propagate(&rows, &occurs, &mut b, seed) {
                continue;
            }
            match order.iter().copied().find(|&k| b.lower[k] < b.upper[k]) {
                None => {
                    let values: Vec<i64> = b.lower.iter().map(|&v| v as i64).collect();
                    let obj = self.objective(&values);
                    rows[objective_row].rhs = obj - 1;
                    best = Some((values, obj));
                }
                Some(k) => {
                    let mut rest = b.clone();
                    rest.lower[k] += 1;
                    let mut first = b;
                    first.upper[k] = first.lower[k];
                    stack.push((rest, Some(k)));
                    stack.push((first, Some(k)));
                }
            }
        }
        match best {
            Some((values, obj)) => Ok(IlpSolution {
                values,
                objective: i64::try_from(obj).map_err(|_| Error::Overflow("objective value"))?,
                nodes,
            }),
            None => Err(Error::Infeasible),
        }
    }
}

#[derive(Clone, Debug)]
struct Bounds {
    lower: Vec<i128>,
    upper: Vec<i128>,
}

fn min_term(a: i128, lo: i128, hi: i128) -> i128 {
    if a > 0 {
        a * lo
    } else {
        a * hi
    }
}

/// Bounds-consistency to a fixpoint. Returns false on a wipe-out.
fn propagate(rows: &[Inequality], occurs: &[Vec<usize>], b: &mut Bounds, seed: Vec<usize>) -> bool {
    let mut queued = vec![false; rows.len()];
    let mut queue = alloc::collections::VecDeque::with_capacity(seed.len());
    for r in seed {
        if !queued[r] {
            queued[r] = true;
            queue.push_back(r);
        }
    }
    while let Some(r) = queue.pop_front() {
        queued[r] = false;
        let row = &rows[r];
        let min_activity: i128 = row
            .terms
            .iter()
            .map(|&(k, a)| min_term(a, b.lower[k], b.upper[k]))
            .sum();
        if min_activity > row.rhs {
            return false;
        }
        for &(k, a) in &row.terms {
            let residual = row.rhs - (min_activity - min_term(a, b.lower[k], b.upper[k]));
            let changed = if a > 0 {
                let cap = residual.div_euclid(a);
                if cap < b.upper[k] {
                    b.upper[k] = cap;
                    true
                } else {
                    false
                }
            } else {
                let floor = -residual.div_euclid(-a);
                if floor > b.lower[k] {
                    b.lower[k] = floor;
                    true
                } else {
                    false
                }
            };
            if changed {
                if b.lower[k] > b.upper[k] {
                    return false;
                }
                for &r2 in &occurs[k] {
                    if !queued[r2] {
                        queued[r2] = true;
                        queue.push_back(r2);
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive minimum over the box, first in lexicographic order.
    fn brute(p: &IntegerProgram) -> Option<(Vec<i64>, i128)> {
        let n = p.num_variables();
        let mut x: Vec<i64> = p.lower.clone();
        let mut best: Option<(Vec<i64>, i128)> = None;
        loop {
            if p.is_feasible(&x) {
                let o = p.objective(&x);
                if best.as_ref().is_none_or(|(_, b)| o < *b) {
                    best = Some((x.clone(), o));
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return best;
                }
                k -= 1;
                if x[k] < p.upper[k] {
                    x[k] += 1;
                    break;
                }
                x[k] = p.lower[k];
            }
        }
    }

    #[test]
    fn small_knapsack_cover() {
        // min 3a + 2b + 4c  s.t. a + b + c ≥ 2, 2a + c ≥ 2, all in 0..=3.
        let mut p = IntegerProgram::new();
        let a = p.add_variable(0, 3, 3);
        let b = p.add_variable(0, 3, 2);
        let c = p.add_variable(0, 3, 4);
        p.add_row([(a, -1), (b, -1), (c, -1)], Relation::LessEq, -2);
        p.add_row([(a, -2), (c, -1)], Relation::LessEq, -2);
        let s = p.solve(&SolveOptions::default()).unwrap();
        let (bx, bo) = brute(&p).unwrap();
        assert_eq!(s.objective as i128, bo);
        assert_eq!(s.values, bx);
        assert_eq!(s.values, vec![1, 1, 0]);
    }

    #[test]
    fn equality_rows_and_negative_costs() {
        let mut p = IntegerProgram::new();
        let x = p.add_variable(-4, 4, -1);
        let y = p.add_variable(-4, 4, 2);
        p.add_row([(x, 1), (y, -2)], Relation::Equal, 1);
        let s = p.solve(&SolveOptions::default()).unwrap();
        assert_eq!(s.objective as i128, brute(&p).unwrap().1);
        assert!(p.is_feasible(&s.values));
    }

    #[test]
    fn infeasible_and_empty_programs() {
        let mut p = IntegerProgram::new();
        let x = p.add_variable(0, 5, 1);
        p.add_row([(x, 1)], Relation::LessEq, -1);
        assert_eq!(p.solve(&SolveOptions::default()).unwrap_err(), Error::Infeasible);
        let empty = IntegerProgram::new();
        let s = empty.solve(&SolveOptions::default()).unwrap();
        assert!(s.values.is_empty());
        assert_eq!(s.objective, 0);
    }

    #[test]
    fn incumbent_does_not_change_the_answer() {
        let mut p = IntegerProgram::new();
        let v: Vec<usize> = (0..4).map(|_| p.add_variable(1, 9, 1)).collect();
        p.add_row([(v[0], 1), (v[1], 1), (v[2], -1)], Relation::LessEq, -1);
        p.add_row([(v[3], 1), (v[2], -1)], Relation::LessEq, -1);
        let plain = p.solve(&SolveOptions::default()).unwrap();
        let seeded = p
            .solve(&SolveOptions {
                incumbent: Some(vec![1, 1, 3, 1]),
                node_limit: None,
            })
            .unwrap();
        assert_eq!(plain.values, seeded.values);
        assert_eq!(plain.objective, 6);
    }

    #[test]
    fn node_limit_is_reported() {
        let mut p = IntegerProgram::new();
        for _ in 0..6 {
            p.add_variable(0, 9, -1);
        }
        let e = p
            .solve(&SolveOptions {
                incumbent: None,
                node_limit: Some(3),
            })
            .unwrap_err();
        assert!(e.is_budget());
    }
}

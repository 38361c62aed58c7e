//! Normal forms of binary Boolean instances.
//!
//! [`simplify`] produces the unique simple instance implementing the same
//! fitness function; [`trim`] then drops every binary weight whose endpoints
//! do not sign-interact, which leaves the fitness graph unchanged. Both
//! equivalences have exhaustive checkers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{fitness_table, AssignmentSpace, FitnessGraph, SignDependence};
use crate::instance::{require_boolean, Assignment, FitnessFunction, SimpleInstance, VcspInstance};

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("simplification"))
}

/// Multilinear expansion of a binary Boolean instance.
///
/// A unary `(u0, u1)` contributes `u0` to the constant and `u1 − u0` to
/// `c_i`. A binary table `T` on `{i, j}` contributes `T00` to the constant,
/// `T10 − T00` to `c_i`, `T01 − T00` to `c_j` and `T00 − T01 − T10 + T11` to
/// `c_ij`. Zero coefficients are dropped.
pub fn simplify(instance: &VcspInstance) -> Result<SimpleInstance> {
    require_boolean(instance.domains())?;
    let arity = instance.arity();
    if arity > 2 {
        return Err(Error::UnsupportedArity { arity });
    }
    let mut constant = 0i64;
    let mut unary: BTreeMap<usize, i64> = BTreeMap::new();
    let mut binary: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for c in instance.constraints() {
        let t = c.values();
        match *c.scope() {
            [] => constant = add(constant, t[0])?,
            [i] => {
                constant = add(constant, t[0])?;
                let e = unary.entry(i).or_default();
                *e = add(*e, t[1] - t[0])?;
            }
            [i, j] => {
                constant = add(constant, t[0])?;
                let ei = unary.entry(i).or_default();
                *ei = add(*ei, t[2] - t[0])?;
                let ej = unary.entry(j).or_default();
                *ej = add(*ej, t[1] - t[0])?;
                let cij = t[0] - t[1] - t[2] + t[3];
                let eij = binary.entry((i, j)).or_default();
                *eij = add(*eij, cij)?;
            }
            _ => unreachable!("arity checked above"),
        }
    }
    SimpleInstance::new(
        instance.n(),
        constant,
        unary.into_iter().filter(|&(_, c)| c != 0),
        binary.into_iter().filter(|&(_, c)| c != 0),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceKind {
    Magnitude,
    Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divergence {
    /// The two fitness values differ at this assignment.
    Value {
        at: Assignment,
        left: i64,
        right: i64,
    },
    /// The move `from → from[var ↦ value]` is improving in exactly one of
    /// the two graphs.
    Move {
        from: Assignment,
        var: usize,
        value: usize,
        improving_in_left: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub kind: EquivalenceKind,
    pub first_divergence: Option<Divergence>,
}

impl EquivalenceReport {
    pub fn equal(&self) -> bool {
        self.first_divergence.is_none()
    }
}

fn same_shape<A, B>(a: &A, b: &B) -> Result<()>
where
    A: FitnessFunction + ?Sized,
    B: FitnessFunction + ?Sized,
{
    if a.domains() != b.domains() {
        return Err(Error::ShapeMismatch);
    }
    Ok(())
}

/// Exhaustive comparison of the two fitness functions.
pub fn magnitude_equivalent<A, B>(a: &A, b: &B, max_vertices: usize) -> Result<EquivalenceReport>
where
    A: FitnessFunction + ?Sized,
    B: FitnessFunction + ?Sized,
{
    same_shape(a, b)?;
    let space = AssignmentSpace::new(a.domains(), max_vertices)?;
    let fa = fitness_table(a, &space);
    let fb = fitness_table(b, &space);
    let first_divergence = fa
        .iter()
        .zip(&fb)
        .position(|(x, y)| x != y)
        .map(|code| Divergence::Value {
            at: space.decode(code),
            left: fa[code],
            right: fb[code],
        });
    Ok(EquivalenceReport {
        kind: EquivalenceKind::Magnitude,
        first_divergence,
    })
}

/// Exhaustive comparison of the two fitness graphs.
pub fn sign_equivalent<A, B>(a: &A, b: &B, max_vertices: usize) -> Result<EquivalenceReport>
where
    A: FitnessFunction + ?Sized,
    B: FitnessFunction + ?Sized,
{
    same_shape(a, b)?;
    let ga = FitnessGraph::build(a, max_vertices)?;
    let gb = FitnessGraph::build(b, max_vertices)?;
    let first_divergence = ga.first_edge_divergence(&gb)?.map(|(x, var, value)| {
        let y = ga.space().with_digit(x, var, value);
        Divergence::Move {
            from: ga.space().decode(x),
            var,
            value,
            improving_in_left: ga.fitness(y) > ga.fitness(x),
        }
    });
    Ok(EquivalenceReport {
        kind: EquivalenceKind::Sign,
        first_divergence,
    })
}

/// Outcome of trimming, with the evidence behind each decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrimReport {
    pub instance: SimpleInstance,
    /// Edges whose endpoints are sign-independent.
    pub removed: Vec<(usize, usize)>,
    /// One sign-dependence witness per retained edge.
    pub retained: Vec<SignDependence>,
}

/// Removes, simultaneously, every binary weight whose endpoints do not
/// sign-interact in the fitness graph of the input.
pub fn trim(instance: &SimpleInstance, max_vertices: usize) -> Result<SimpleInstance> {
    trim_with_report(instance, max_vertices).map(|r| r.instance)
}

pub fn trim_with_report(instance: &SimpleInstance, max_vertices: usize) -> Result<TrimReport> {
    let graph = FitnessGraph::build(instance, max_vertices)?;
    let mut removed = Vec::new();
    let mut retained = Vec::new();
    for (i, j) in instance.edges() {
        let witness = match graph.sign_depends(i, j)? {
            Some(w) => Some(w),
            None => graph.sign_depends(j, i)?,
        };
        match witness {
            Some(w) => retained.push(w),
            None => removed.push((i, j)),
        }
    }
    let trimmed = instance.without_edges(&removed);
    let check = FitnessGraph::build(&trimmed, max_vertices)?;
    if let Some((x, var, _)) = graph.first_edge_divergence(&check)? {
        return Err(Error::Internal(alloc::format!(
            "trimmed instance changes the move of variable {} at {}",
            var + 1,
            graph.space().decode(x)
        )));
    }
    Ok(TrimReport {
        instance: trimmed,
        removed,
        retained,
    })
}

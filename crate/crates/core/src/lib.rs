//! Fitness landscapes of valued constraint satisfaction problems.
//!
//! The crate is `no_std` and only needs `alloc`. It covers instance
//! evaluation, explicit fitness graphs, simple and trimmed normal forms,
//! span minimisation, local-search dynamics with encouragement analysis, and
//! generators for the standard instance families.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cgraph;
pub mod dynamics;
pub mod error;
pub mod gen;
pub mod graph;
pub mod ilp;
pub mod instance;
pub mod normal;
pub mod span;

pub use cgraph::{ConstraintGraph, TreeDecomposition};
pub use error::{Error, Result};
pub use graph::{
    fitness_table, sign_depends, sign_interact, AssignmentCode, AssignmentSpace, FitnessGraph,
    LongestPath, SignDependence, DEFAULT_MAX_VERTICES,
};
pub use instance::{Assignment, Constraint, FitnessFunction, SimpleInstance, VcspInstance};
pub use normal::{
    magnitude_equivalent, sign_equivalent, simplify, trim, trim_with_report, Divergence,
    EquivalenceKind, EquivalenceReport, TrimReport,
};

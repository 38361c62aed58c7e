//! Valued-constraint instances and the fitness functions they implement.
//!
//! A [`VcspInstance`] is a list of finite domains plus a set of integer-valued
//! constraints; the fitness of an assignment is the sum of every constraint
//! evaluated on the restriction of the assignment to its scope. Tables are
//! stored row-major with the first (smallest) scope variable most significant,
//! so for a binary constraint on `{i, j}` with `i < j`, `x_i` selects the row.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Ceiling on `Σ max |C_S|` over all constraints.
///
/// Any fitness value, and any difference of two fitness values, then fits in
/// an `i64`, so evaluation never needs checked arithmetic.
pub const MAX_TOTAL_MAGNITUDE: i64 = 1 << 60;

/// Anything that assigns an integer fitness to every point of a finite
/// product of domains.
pub trait FitnessFunction {
    fn domains(&self) -> &[usize];

    /// Fitness of an assignment already known to be valid.
    fn fitness(&self, x: &[usize]) -> i64;

    fn num_vars(&self) -> usize {
        self.domains().len()
    }

    fn is_boolean(&self) -> bool {
        self.domains().iter().all(|&d| d == 2)
    }

    fn check_assignment(&self, x: &[usize]) -> Result<()> {
        check_assignment(self.domains(), x)
    }
}

pub(crate) fn check_assignment(domains: &[usize], x: &[usize]) -> Result<()> {
    if x.len() != domains.len() {
        return Err(Error::Dimension {
            expected: domains.len(),
            found: x.len(),
        });
    }
    for (var, (&value, &size)) in x.iter().zip(domains).enumerate() {
        if value >= size {
            return Err(Error::ValueOutOfDomain { var, value, size });
        }
    }
    Ok(())
}

pub(crate) fn require_boolean(domains: &[usize]) -> Result<()> {
    match domains.iter().position(|&d| d != 2) {
        Some(var) => Err(Error::UnsupportedDomain {
            var,
            size: domains[var],
        }),
        None => Ok(()),
    }
}

/// A valued constraint: a scope of strictly increasing variable indices and
/// a row-major value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    scope: Vec<usize>,
    values: Vec<i64>,
}

impl Constraint {
    pub fn new(scope: Vec<usize>, values: Vec<i64>) -> Result<Self> {
        if scope.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ScopeOrder { scope });
        }
        Ok(Self { scope, values })
    }

    pub fn nullary(value: i64) -> Self {
        Self {
            scope: Vec::new(),
            values: vec![value],
        }
    }

    pub fn unary(var: usize, values: Vec<i64>) -> Self {
        Self {
            scope: vec![var],
            values,
        }
    }

    /// Binary constraint on `{i, j}`; `values` is indexed `[x_i][x_j]` and
    /// `i < j` is required.
    pub fn binary(i: usize, j: usize, values: Vec<i64>) -> Result<Self> {
        Self::new(vec![i, j], values)
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn max_value(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn min_value(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    /// `max − min` over the table.
    pub fn span(&self) -> i64 {
        self.max_value() - self.min_value()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Table index of the restriction of `x` to the scope.
    #[inline]
    pub fn index(&self, domains: &[usize], x: &[usize]) -> usize {
        self.scope
            .iter()
            .fold(0, |acc, &v| acc * domains[v] + x[v])
    }

    #[inline]
    pub fn value_at(&self, domains: &[usize], x: &[usize]) -> i64 {
        self.values[self.index(domains, x)]
    }

    fn canonical_key(&self) -> (usize, &[usize]) {
        (self.scope.len(), &self.scope)
    }
}

/// A VCSP instance over `n` variables with finite domains.
///
/// Constraints are kept in canonical order (by arity, then scope), and at
/// most one constraint exists per scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VcspInstance {
    domains: Vec<usize>,
    constraints: Vec<Constraint>,
    name: Option<String>,
}

impl VcspInstance {
    pub fn new(domains: Vec<usize>, mut constraints: Vec<Constraint>) -> Result<Self> {
        let n = domains.len();
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        if let Some(var) = domains.iter().position(|&d| d < 2) {
            return Err(Error::DomainSize {
                var,
                size: domains[var],
            });
        }
        let mut total: i64 = 0;
        for c in &constraints {
            if let Some(&var) = c.scope.iter().find(|&&v| v >= n) {
                return Err(Error::ScopeRange { var, n });
            }
            let expected = c
                .scope
                .iter()
                .try_fold(1usize, |acc, &v| acc.checked_mul(domains[v]))
                .ok_or(Error::Overflow("constraint table size"))?;
            if c.values.len() != expected {
                return Err(Error::TableSize {
                    scope: c.scope.clone(),
                    expected,
                    found: c.values.len(),
                });
            }
            let magnitude = c
                .values
                .iter()
                .map(|v| v.unsigned_abs())
                .max()
                .unwrap_or(0);
            total = i64::try_from(magnitude)
                .ok()
                .and_then(|m| total.checked_add(m))
                .filter(|&t| t <= MAX_TOTAL_MAGNITUDE)
                .ok_or(Error::Overflow("total constraint magnitude exceeds 2^60"))?;
        }
        constraints.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
        if let Some(w) = constraints.windows(2).find(|w| w[0].scope == w[1].scope) {
            return Err(Error::DuplicateScope {
                scope: w[0].scope.clone(),
            });
        }
        Ok(Self {
            domains,
            constraints,
            name: None,
        })
    }

    pub fn boolean(n: usize, constraints: Vec<Constraint>) -> Result<Self> {
        Self::new(vec![2; n], constraints)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.domains.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint_on(&self, scope: &[usize]) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.scope == scope)
    }

    pub fn arity(&self) -> usize {
        self.constraints.iter().map(Constraint::arity).max().unwrap_or(0)
    }

    /// Validating evaluation.
    pub fn evaluate(&self, x: &Assignment) -> Result<i64> {
        self.check_assignment(&x.0)?;
        Ok(self.fitness(&x.0))
    }

    /// Same variables and domains, constraints taken from both. Fails on a
    /// shared scope.
    pub fn union(&self, other: &VcspInstance) -> Result<VcspInstance> {
        if self.domains != other.domains {
            return Err(Error::ShapeMismatch);
        }
        let mut all = self.constraints.clone();
        all.extend(other.constraints.iter().cloned());
        VcspInstance::new(self.domains.clone(), all)
    }

    /// Every table multiplied by `factor`.
    pub fn scaled(&self, factor: i64) -> Result<VcspInstance> {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let values = c
                    .values
                    .iter()
                    .map(|v| v.checked_mul(factor).ok_or(Error::Overflow("scaling")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Constraint {
                    scope: c.scope.clone(),
                    values,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        VcspInstance::new(self.domains.clone(), constraints)
    }
}

impl FitnessFunction for VcspInstance {
    fn domains(&self) -> &[usize] {
        &self.domains
    }

    #[inline]
    fn fitness(&self, x: &[usize]) -> i64 {
        self.constraints
            .iter()
            .map(|c| c.value_at(&self.domains, x))
            .sum()
    }
}

/// One point of the search space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x[var ↦ value]`.
    pub fn with(&self, var: usize, value: usize) -> Self {
        let mut y = self.clone();
        y.0[var] = value;
        y
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

/// Digits when every value is below 10 (`0110`), comma-separated otherwise.
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&v| v < 10) {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
        } else {
            for (k, v) in self.0.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(alloc::format!("cannot parse assignment {s:?}"));
        if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(Assignment)
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()
                .map(Assignment)
        }
    }
}

/// Binary Boolean normal form: `f(x) = C_∅ + Σ c_i x_i + Σ c_ij x_i x_j`.
///
/// Only nonzero weights are stored, so "edge present" and "weight stored"
/// mean the same thing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleInstance {
    domains: Vec<usize>,
    constant: i64,
    unary: BTreeMap<usize, i64>,
    binary: BTreeMap<(usize, usize), i64>,
}

impl SimpleInstance {
    pub fn new(
        n: usize,
        constant: i64,
        unary: impl IntoIterator<Item = (usize, i64)>,
        binary: impl IntoIterator<Item = ((usize, usize), i64)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        let mut total = constant.unsigned_abs();
        let mut u = BTreeMap::new();
        for (i, c) in unary {
            if i >= n {
                return Err(Error::ScopeRange { var: i, n });
            }
            if c == 0 {
                return Err(Error::ZeroWeight { scope: vec![i] });
            }
            if u.insert(i, c).is_some() {
                return Err(Error::DuplicateScope { scope: vec![i] });
            }
            total = total.saturating_add(c.unsigned_abs());
        }
        let mut b = BTreeMap::new();
        for ((i, j), c) in binary {
            if i >= j {
                return Err(Error::ScopeOrder { scope: vec![i, j] });
            }
            if j >= n {
                return Err(Error::ScopeRange { var: j, n });
            }
            if c == 0 {
                return Err(Error::ZeroWeight { scope: vec![i, j] });
            }
            if b.insert((i, j), c).is_some() {
                return Err(Error::DuplicateScope { scope: vec![i, j] });
            }
            total = total.saturating_add(c.unsigned_abs());
        }
        if total > MAX_TOTAL_MAGNITUDE as u64 {
            return Err(Error::Overflow("total weight magnitude exceeds 2^60"));
        }
        Ok(Self {
            domains: vec![2; n],
            constant,
            unary: u,
            binary: b,
        })
    }

    pub fn n(&self) -> usize {
        self.domains.len()
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    pub fn unary(&self) -> &BTreeMap<usize, i64> {
        &self.unary
    }

    pub fn binary(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.binary
    }

    /// `c_i`, zero when absent.
    pub fn unary_weight(&self, i: usize) -> i64 {
        self.unary.get(&i).copied().unwrap_or(0)
    }

    /// `c_ij` in either argument order, zero when absent.
    pub fn binary_weight(&self, i: usize, j: usize) -> i64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.binary.get(&key).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.binary.keys().copied()
    }

    /// Constraint-graph neighbours of `i`, ascending.
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .binary
            .keys()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `Σ |c_i|`.
    pub fn unary_span(&self) -> i64 {
        self.unary.values().map(|c| c.abs()).sum()
    }

    /// `Σ |c_ij|`.
    pub fn binary_span(&self) -> i64 {
        self.binary.values().map(|c| c.abs()).sum()
    }

    pub fn span(&self) -> i64 {
        self.unary_span() + self.binary_span()
    }

    /// Copy without the listed edges.
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> SimpleInstance {
        let mut out = self.clone();
        for e in removed {
            out.binary.remove(e);
        }
        out
    }

    /// Same signs, new magnitudes; zero magnitudes drop the weight.
    pub fn with_magnitudes(
        &self,
        unary: impl IntoIterator<Item = (usize, i64)>,
        binary: impl IntoIterator<Item = ((usize, usize), i64)>,
    ) -> Result<SimpleInstance> {
        let u: Vec<_> = unary
            .into_iter()
            .filter(|&(_, m)| m != 0)
            .map(|(i, m)| (i, self.unary_weight(i).signum() * m))
            .collect();
        let b: Vec<_> = binary
            .into_iter()
            .filter(|&(_, m)| m != 0)
            .map(|((i, j), m)| ((i, j), self.binary_weight(i, j).signum() * m))
            .collect();
        SimpleInstance::new(self.n(), self.constant, u, b)
    }

    /// Lossless conversion: unary `(0, c_i)`, binary `[0 0; 0 c_ij]`, and a
    /// nullary constraint when the constant is nonzero.
    pub fn to_vcsp(&self) -> VcspInstance {
        let mut cs = Vec::with_capacity(1 + self.unary.len() + self.binary.len());
        if self.constant != 0 {
            cs.push(Constraint::nullary(self.constant));
        }
        for (&i, &c) in &self.unary {
            cs.push(Constraint::unary(i, vec![0, c]));
        }
        for (&(i, j), &c) in &self.binary {
            cs.push(Constraint {
                scope: vec![i, j],
                values: vec![0, 0, 0, c],
            });
        }
        VcspInstance::new(self.domains.clone(), cs)
            .expect("simple instances are valid by construction")
    }
}

impl FitnessFunction for SimpleInstance {
    fn domains(&self) -> &[usize] {
        &self.domains
    }

    #[inline]
    fn fitness(&self, x: &[usize]) -> i64 {
        let mut f = self.constant;
        for (&i, &c) in &self.unary {
            if x[i] == 1 {
                f += c;
            }
        }
        for (&(i, j), &c) in &self.binary {
            if x[i] == 1 && x[j] == 1 {
                f += c;
            }
        }
        f
    }
}

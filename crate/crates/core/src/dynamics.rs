//! Local-search traces and their encouragement structure.
//!
//! A [`Trace`] is an improving 1-flip path. Flip `t` (0-based here, printed
//! 1-based) moves `x^t` to `x^{t+1}`. For Boolean instances, flip `t'`
//! supports flip `t = (i ↦ b)` when, with `j ↦ c` the move at `t'`,
//! `gain(x^{t'}[j ↦ c], i, b) > 0 ≥ gain(x^{t'}[j ↦ c̄], i, b)`; the support
//! is strong when `x^t_j = c`. The most recent strong supporter of a flip is
//! its encourager, and a flip without one is courageous. The resulting
//! parent pointers form the encouragement forest.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cgraph::ConstraintGraph;
use crate::error::{Error, Result};
use crate::instance::{check_assignment, require_boolean, Assignment, FitnessFunction};

pub const DEFAULT_STEP_LIMIT: usize = 1 << 20;

/// `m(t) = (var ↦ value)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flip {
    pub var: usize,
    pub value: usize,
}

/// `i↦b` with `i` 1-based.
impl fmt::Display for Flip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}↦{}", self.var + 1, self.value)
    }
}

/// An improving path with its flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    assignments: Vec<Assignment>,
    fitness: Vec<i64>,
    flips: Vec<Flip>,
    /// The step limit stopped the search before a local optimum.
    pub truncated: bool,
    /// Seed of the random policy that produced the trace, if any.
    pub seed: Option<u64>,
}

impl Trace {
    /// Validates that consecutive assignments differ in exactly one position
    /// and that fitness strictly increases.
    pub fn from_assignments<F: FitnessFunction + ?Sized>(
        f: &F,
        assignments: Vec<Assignment>,
    ) -> Result<Self> {
        if assignments.is_empty() {
            return Err(Error::InvalidTrace {
                step: 0,
                reason: "a trace needs at least one assignment",
            });
        }
        let mut fitness = Vec::with_capacity(assignments.len());
        for x in &assignments {
            check_assignment(f.domains(), &x.0)?;
            fitness.push(f.fitness(&x.0));
        }
        let mut flips = Vec::with_capacity(assignments.len() - 1);
        for (t, w) in assignments.windows(2).enumerate() {
            let mut changed = w[0].0.iter().zip(&w[1].0).enumerate().filter(|(_, (a, b))| a != b);
            let var = match (changed.next(), changed.next()) {
                (Some((var, _)), None) => var,
                _ => {
                    return Err(Error::InvalidTrace {
                        step: t,
                        reason: "consecutive assignments must differ in exactly one position",
                    })
                }
            };
            if fitness[t + 1] <= fitness[t] {
                return Err(Error::InvalidTrace {
                    step: t,
                    reason: "fitness must strictly increase",
                });
            }
            flips.push(Flip {
                var,
                value: w[1].0[var],
            });
        }
        Ok(Self {
            assignments,
            fitness,
            flips,
            truncated: false,
            seed: None,
        })
    }

    /// Number of assignments, `T`.
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.flips.len()
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.assignments
    }

    pub fn fitness(&self) -> &[i64] {
        &self.fitness
    }

    pub fn flips(&self) -> &[Flip] {
        &self.flips
    }

    pub fn last(&self) -> &Assignment {
        self.assignments.last().expect("traces are nonempty")
    }

    /// Flip table as `i↦b` strings.
    pub fn flip_table(&self) -> Vec<String> {
        self.flips.iter().map(|m| format!("{m}")).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    /// Largest gain; ties to the lowest variable, then the lowest value.
    Steepest,
    /// First improving move in (variable, value) order.
    First,
    /// Uniform over improving moves, from a ChaCha8 stream seeded with the
    /// given value.
    Random(u64),
    /// Smallest positive gain; ties as for `Steepest`.
    Worst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchPolicy {
    pub kind: PolicyKind,
    /// Maximum number of flips.
    pub step_limit: usize,
}

impl SearchPolicy {
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }

    pub fn with_step_limit(mut self, step_limit: usize) -> Self {
        self.step_limit = step_limit;
        self
    }
}

/// Runs the policy from `start` until a local optimum or the step limit.
pub fn run_search<F: FitnessFunction + ?Sized>(
    f: &F,
    start: &Assignment,
    policy: SearchPolicy,
) -> Result<Trace> {
    let domains = f.domains();
    check_assignment(domains, &start.0)?;
    let mut rng = match policy.kind {
        PolicyKind::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut x = start.0.clone();
    let mut fx = f.fitness(&x);
    let mut assignments = vec![start.clone()];
    let mut fitness = vec![fx];
    let mut flips = Vec::new();
    let mut moves: Vec<(Flip, i64)> = Vec::new();
    let mut truncated = false;
    loop {
        moves.clear();
        for var in 0..domains.len() {
            let cur = x[var];
            for value in (0..domains[var]).filter(|&v| v != cur) {
                x[var] = value;
                let g = f.fitness(&x) - fx;
                x[var] = cur;
                if g > 0 {
                    moves.push((Flip { var, value }, g));
                    if policy.kind == PolicyKind::First {
                        break;
                    }
                }
            }
            if policy.kind == PolicyKind::First && !moves.is_empty() {
                break;
            }
        }
        if moves.is_empty() {
            break;
        }
        if flips.len() == policy.step_limit {
            truncated = true;
            break;
        }
        // `moves` is in (variable, value) order, so the first extremum wins ties.
        let pick = match policy.kind {
            PolicyKind::First => 0,
            PolicyKind::Steepest => {
                let best = moves.iter().map(|m| m.1).max().unwrap_or(0);
                moves.iter().position(|m| m.1 == best).unwrap_or(0)
            }
            PolicyKind::Worst => {
                let least = moves.iter().map(|m| m.1).min().unwrap_or(0);
                moves.iter().position(|m| m.1 == least).unwrap_or(0)
            }
            PolicyKind::Random(_) => rng
                .as_mut()
                .map(|r| r.gen_range(0..moves.len()))
                .unwrap_or(0),
        };
        let (m, g) = moves[pick];
        x[m.var] = m.value;
        fx += g;
        flips.push(m);
        assignments.push(Assignment(x.clone()));
        fitness.push(fx);
    }
    Ok(Trace {
        assignments,
        fitness,
        flips,
        truncated,
        seed: match policy.kind {
            PolicyKind::Random(seed) => Some(seed),
            _ => None,
        },
    })
}

/// `gain(x, i, b) = f(x[i ↦ b]) − f(x[i ↦ b̄])` for Boolean `f`.
pub fn gain<F: FitnessFunction + ?Sized>(f: &F, x: &Assignment, i: usize, b: usize) -> Result<i64> {
    require_boolean(f.domains())?;
    check_assignment(f.domains(), &x.0)?;
    if i >= x.len() || b > 1 {
        return Err(Error::InvalidParameter(format!(
            "gain needs a variable in 1..={} and a value in {{0, 1}}",
            x.len()
        )));
    }
    let mut y = x.0.clone();
    Ok(raw_gain(f, &mut y, i, b))
}

/// Gain with `y` used as scratch and restored.
fn raw_gain<F: FitnessFunction + ?Sized>(f: &F, y: &mut [usize], i: usize, b: usize) -> i64 {
    let keep = y[i];
    y[i] = b;
    let with = f.fitness(y);
    y[i] = 1 - b;
    let without = f.fitness(y);
    y[i] = keep;
    with - without
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    None,
    Weak,
    Strong,
}

/// Whether flip `earlier` supports flip `later` (both 0-based flip indices).
pub fn supports<F: FitnessFunction + ?Sized>(
    f: &F,
    trace: &Trace,
    earlier: usize,
    later: usize,
) -> Result<Support> {
    require_boolean(f.domains())?;
    if earlier >= later || later >= trace.steps() {
        return Err(Error::InvalidParameter(format!(
            "support needs flip indices 1 ≤ t' < t ≤ {}",
            trace.steps()
        )));
    }
    let mut scratch = trace.assignments[earlier].0.clone();
    Ok(support_unchecked(f, trace, earlier, later, &mut scratch))
}

fn support_unchecked<F: FitnessFunction + ?Sized>(
    f: &F,
    trace: &Trace,
    earlier: usize,
    later: usize,
    scratch: &mut [usize],
) -> Support {
    let Flip { var: j, value: c } = trace.flips[earlier];
    let Flip { var: i, value: b } = trace.flips[later];
    scratch.copy_from_slice(&trace.assignments[earlier].0);
    scratch[j] = c;
    let on = raw_gain(f, scratch, i, b);
    scratch[j] = 1 - c;
    let off = raw_gain(f, scratch, i, b);
    if on > 0 && off <= 0 {
        if trace.assignments[later].0[j] == c {
            Support::Strong
        } else {
            Support::Weak
        }
    } else {
        Support::None
    }
}

/// Encourager of each flip, `None` for courageous flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncouragementForest {
    parents: Vec<Option<usize>>,
}

impl EncouragementForest {
    /// Arbitrary parent pointers, used for negative controls. Parents must
    /// precede their children.
    pub fn from_parents(parents: Vec<Option<usize>>) -> Result<Self> {
        for (t, p) in parents.iter().enumerate() {
            if matches!(p, Some(q) if *q >= t) {
                return Err(Error::InvalidParameter(format!(
                    "flip {} has a parent that is not earlier",
                    t + 1
                )));
            }
        }
        Ok(Self { parents })
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parents
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.parents[t].is_none()).collect()
    }

    pub fn children(&self, t: usize) -> Vec<usize> {
        (t + 1..self.len())
            .filter(|&u| self.parents[u] == Some(t))
            .collect()
    }

    /// Flips from the root down to `t`.
    pub fn path_to(&self, t: usize) -> Vec<usize> {
        let mut path = vec![t];
        let mut cur = t;
        while let Some(p) = self.parents[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Root-to-leaf chains in `⊥ ⇐ (t,i↦b) ⇐ …` notation, ordered by root
    /// and then by leaf.
    pub fn chains(&self, trace: &Trace) -> Vec<String> {
        let has_child: BTreeSet<usize> = self.parents.iter().flatten().copied().collect();
        let mut leaves: Vec<(usize, usize)> = (0..self.len())
            .filter(|t| !has_child.contains(t))
            .map(|t| (self.path_to(t)[0], t))
            .collect();
        leaves.sort_unstable();
        leaves
            .into_iter()
            .map(|(_, leaf)| {
                let mut s = String::from("⊥");
                for t in self.path_to(leaf) {
                    s.push_str(&format!(" ⇐ ({},{})", t + 1, trace.flips[t]));
                }
                s
            })
            .collect()
    }
}

/// Most recent strong supporter of every flip.
pub fn encouragement_forest<F: FitnessFunction + ?Sized>(
    f: &F,
    trace: &Trace,
) -> Result<EncouragementForest> {
    require_boolean(f.domains())?;
    let mut scratch = vec![0usize; f.num_vars()];
    let parents = (0..trace.steps())
        .map(|t| {
            (0..t)
                .rev()
                .find(|&s| support_unchecked(f, trace, s, t, &mut scratch) == Support::Strong)
        })
        .collect();
    Ok(EncouragementForest { parents })
}

/// Outcome of one property check; `witness` lists 0-based flip indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const GAIN_POSITIVE_SINCE_ENCOURAGER: &str = "gain_positive_since_encourager";
pub const ONLY_FIRST_FLIP_COURAGEOUS: &str = "only_first_flip_courageous";
pub const NO_POSITION_REVERSAL: &str = "no_position_reversal";
pub const ONE_CHILD_PER_POSITION: &str = "one_child_per_position";
pub const NO_OPPOSITE_PATHS: &str = "no_opposite_paths";
pub const ROOTS_AT_MOST_N: &str = "roots_at_most_n";
pub const FOREST_MATCHES_DEFINITION: &str = "forest_matches_definition";

fn outcome(name: &'static str, failure: Option<(Vec<usize>, String)>) -> PropertyCheck {
    match failure {
        None => PropertyCheck {
            name,
            passed: true,
            witness: Vec::new(),
            detail: String::new(),
        },
        Some((witness, detail)) => PropertyCheck {
            name,
            passed: false,
            witness,
            detail,
        },
    }
}

/// Checks the structural properties of an encouragement forest against its
/// trace. Failures are report entries, not errors.
pub fn verify_trace_properties<F: FitnessFunction + ?Sized>(
    f: &F,
    trace: &Trace,
    forest: &EncouragementForest,
) -> Result<PropertyReport> {
    require_boolean(f.domains())?;
    if forest.len() != trace.steps() {
        return Err(Error::InvalidParameter(format!(
            "forest has {} nodes but the trace has {} flips",
            forest.len(),
            trace.steps()
        )));
    }
    let m = &trace.flips;
    let pos = |t: usize| m[t].var;
    let mut scratch = vec![0usize; f.num_vars()];
    let mut checks = Vec::new();

    // Gain stays positive at every state from just after the encourager
    // (or from the start) up to the flip itself.
    let mut fail = None;
    'outer: for (t, mt) in m.iter().enumerate() {
        let from = forest.parents[t].map_or(0, |p| p + 1);
        for s in from..=t {
            scratch.copy_from_slice(&trace.assignments[s].0);
            let g = raw_gain(f, &mut scratch, mt.var, mt.value);
            if g <= 0 {
                fail = Some((
                    vec![t, s],
                    format!(
                        "flip {} ({}) has gain {} at state {}",
                        t + 1,
                        mt,
                        g,
                        s + 1
                    ),
                ));
                break 'outer;
            }
        }
    }
    checks.push(outcome(GAIN_POSITIVE_SINCE_ENCOURAGER, fail));

    let mut fail = None;
    let mut seen = BTreeSet::new();
    for t in 0..m.len() {
        if forest.parents[t].is_none() && seen.contains(&pos(t)) {
            let first = (0..t).find(|&s| pos(s) == pos(t)).unwrap_or(0);
            fail = Some((
                vec![t, first],
                format!(
                    "flip {} at position {} is courageous but flip {} came first",
                    t + 1,
                    pos(t) + 1,
                    first + 1
                ),
            ));
            break;
        }
        seen.insert(pos(t));
    }
    checks.push(outcome(ONLY_FIRST_FLIP_COURAGEOUS, fail));

    let mut fail = None;
    for t3 in 0..m.len() {
        if let Some(t2) = forest.parents[t3] {
            if let Some(t1) = forest.parents[t2] {
                if pos(t1) == pos(t3) {
                    fail = Some((
                        vec![t1, t2, t3],
                        format!(
                            "chain {} ⇐ {} ⇐ {} returns to position {}",
                            t1 + 1,
                            t2 + 1,
                            t3 + 1,
                            pos(t3) + 1
                        ),
                    ));
                    break;
                }
            }
        }
    }
    checks.push(outcome(NO_POSITION_REVERSAL, fail));

    let mut fail = None;
    let mut by_parent: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in 0..m.len() {
        if let Some(p) = forest.parents[t] {
            if let Some(&other) = by_parent.get(&(p, pos(t))) {
                fail = Some((
                    vec![p, other, t],
                    format!(
                        "flip {} encourages flips {} and {} at position {}",
                        p + 1,
                        other + 1,
                        t + 1,
                        pos(t) + 1
                    ),
                ));
                break;
            }
            by_parent.insert((p, pos(t)), t);
        }
    }
    checks.push(outcome(ONE_CHILD_PER_POSITION, fail));

    let mut fail = None;
    let mut sequences: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for t in 0..m.len() {
        let seq: Vec<usize> = forest.path_to(t).into_iter().map(pos).collect();
        if seq.len() >= 2 {
            sequences.entry(seq).or_insert(t);
        }
    }
    for (seq, &t) in &sequences {
        let rev: Vec<usize> = seq.iter().rev().copied().collect();
        if let Some(&u) = sequences.get(&rev) {
            if rev != *seq {
                fail = Some((
                    vec![t, u],
                    format!(
                        "encouragement paths ending at flips {} and {} traverse the same positions in opposite directions",
                        t + 1,
                        u + 1
                    ),
                ));
                break;
            }
        }
    }
    checks.push(outcome(NO_OPPOSITE_PATHS, fail));

    let roots = forest.roots();
    let n = f.num_vars();
    checks.push(outcome(
        ROOTS_AT_MOST_N,
        (roots.len() > n).then(|| (roots.clone(), format!("{} courageous flips for {} variables", roots.len(), n))),
    ));

    let mut fail = None;
    for t in 0..m.len() {
        let expected = (0..t)
            .rev()
            .find(|&s| support_unchecked(f, trace, s, t, &mut scratch) == Support::Strong);
        if expected != forest.parents[t] {
            let mut w = vec![t];
            w.extend(forest.parents[t]);
            fail = Some((
                w,
                format!(
                    "flip {} has parent {} but its most recent strong supporter is {}",
                    t + 1,
                    forest.parents[t].map_or(String::from("⊥"), |p| format!("{}", p + 1)),
                    expected.map_or(String::from("⊥"), |p| format!("{}", p + 1))
                ),
            ));
            break;
        }
    }
    checks.push(outcome(FOREST_MATCHES_DEFINITION, fail));

    Ok(PropertyReport { checks })
}

/// First encouragement link whose positions are not adjacent in `graph`,
/// or first root path that revisits a position.
pub fn encouragement_embedding_failure(
    trace: &Trace,
    forest: &EncouragementForest,
    graph: &ConstraintGraph,
) -> Option<Vec<usize>> {
    for t in 0..forest.len() {
        let path = forest.path_to(t);
        let positions: Vec<usize> = path.iter().map(|&s| trace.flips[s].var).collect();
        if !graph.is_simple_path(&positions) {
            return Some(path);
        }
    }
    None
}

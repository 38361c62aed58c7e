//! Instance families with known landscape behaviour, plus a seeded random
//! generator used by the property suites.
//!
//! Each structured family checks its defining property when it is built and
//! fails with `GENERATOR_INVARIANT` if the check does not hold.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cgraph::TreeDecomposition;
use crate::dynamics::Trace;
use crate::error::{Error, Result};
use crate::ilp::{IntegerProgram, Relation, SolveOptions};
use crate::instance::{Assignment, Constraint, VcspInstance};

fn invalid(msg: impl Into<alloc::string::String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Path on `n` Boolean variables; the edge `{i, i+1}` (1-based) carries
/// `diag(i, i)`, rewarding equal neighbours, and variable `n` carries the
/// unary `(0, n)`. Fitness ranges over `0..=n(n+1)/2`.
pub fn quadratic_path(n: usize) -> Result<VcspInstance> {
    if n < 2 {
        return Err(invalid("quadratic_path needs n ≥ 2"));
    }
    let mut constraints = (0..n - 1)
        .map(|i| {
            let w = i as i64 + 1;
            Constraint::binary(i, i + 1, vec![w, 0, 0, w])
        })
        .collect::<Result<Vec<_>>>()?;
    constraints.push(Constraint::unary(n - 1, vec![0, n as i64]));
    Ok(VcspInstance::boolean(n, constraints)?.with_name(format!("quadratic_path({n})")))
}

/// `(10)^{n/2}`, with a trailing 1 when `n` is odd: leftmost-first search from
/// here visits `C(n,2) + n + 1` assignments.
pub fn quadratic_path_start(n: usize) -> Assignment {
    Assignment((0..n).map(|k| if k % 2 == 0 { 1 } else { 0 }).collect())
}

/// Value index of the third symbol `▷` in the domain-3 family.
pub const TRIANGLE: usize = 2;

/// Path on `n + 1` variables over `{0, 1, ▷}` (indices 0, 1, 2). The edge
/// between variables `v` and `v + 1` (0-based) has table `3^{n−v} · P` with
/// `P(a, b) = ((a + b) mod 3) + 1`, so the leftmost edge is heaviest.
pub fn domain3_counting(n: usize) -> Result<VcspInstance> {
    if n < 1 {
        return Err(invalid("domain3_counting needs n ≥ 1"));
    }
    let mut constraints = Vec::with_capacity(n);
    for v in 0..n {
        let scale = 3i64
            .checked_pow((n - v) as u32)
            .ok_or(Error::Overflow("domain3_counting weight"))?;
        let mut table = Vec::with_capacity(9);
        for a in 0..3i64 {
            for b in 0..3i64 {
                table.push(scale * (((a + b) % 3) + 1));
            }
        }
        constraints.push(Constraint::binary(v, v + 1, table)?);
    }
    let inst = VcspInstance::new(vec![3; n + 1], constraints)?.with_name(format!("domain3_counting({n})"));
    if n <= 6 {
        domain3_counting_trace(&inst, n)?;
    }
    Ok(inst)
}

/// Counting in binary from `0^{n+1}` to `01^n` on the rightmost `n` digits.
/// From `y01^k` the ones become `▷` left to right, the 0 becomes 1, and the
/// `▷`s become 0 right to left.
pub fn domain3_counting_schedule(n: usize) -> Vec<Assignment> {
    let mut x = vec![0usize; n + 1];
    let mut out = vec![Assignment(x.clone())];
    for _ in 1..(1usize << n) {
        let mut k = 0;
        while x[n - k] == 1 {
            k += 1;
        }
        let zero = n - k;
        for v in zero + 1..=n {
            x[v] = TRIANGLE;
            out.push(Assignment(x.clone()));
        }
        x[zero] = 1;
        out.push(Assignment(x.clone()));
        for v in (zero + 1..=n).rev() {
            x[v] = 0;
            out.push(Assignment(x.clone()));
        }
    }
    out
}

/// The counting schedule as a validated improving trace.
pub fn domain3_counting_trace(instance: &VcspInstance, n: usize) -> Result<Trace> {
    Trace::from_assignments(instance, domain3_counting_schedule(n)).map_err(|e| {
        Error::GeneratorInvariant(format!("domain3_counting({n}) schedule is not improving: {e}"))
    })
}

/// A built treewidth-2 instance with its derived weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Treewidth2Counting {
    pub instance: VcspInstance,
    /// `w_0 = 0, w_1, …, w_K`; `w_{i+1}` links block `i` to the block above.
    pub link_weights: Vec<i64>,
    /// `(c_1, c_2, c_3, c_4, c_12, c_23, c_34, c_41)` per block.
    pub block_weights: Vec<[i64; 8]>,
    pub decomposition: TreeDecomposition,
}

/// Transitions of one block, as (local variable 1..=4, new value), when the
/// linked variable of the block above is 1.
const RISE: [(usize, usize); 3] = [(4, 1), (1, 1), (3, 1)];
/// The same when the linked variable above is 0.
const FALL: [(usize, usize); 7] = [(4, 0), (1, 0), (2, 1), (3, 0), (1, 1), (2, 0), (1, 0)];

/// Index of each unknown in the per-block weight search.
const C1: usize = 0;
const C2: usize = 1;
const C3: usize = 2;
const C4: usize = 3;
const C12: usize = 4;
const C23: usize = 5;
const C34: usize = 6;
const C41: usize = 7;
const UP: usize = 8;
const UNKNOWNS: usize = 9;

/// Finds the weights of one block given the weight `w` of the link below it.
///
/// Every move of the two transition sequences must be strictly improving
/// given the states of the neighbouring blocks at that moment. Each sign
/// pattern of the nine unknowns gives an integer program over magnitudes in
/// `1..=4w + 64`; the pattern with the smallest total magnitude wins, ties to
/// the earlier pattern.
fn block_weights(w: i64) -> Result<([i64; 8], i64)> {
    // (coefficients over unknowns, constant, sign): Σ a·c + constant  > 0
    // when sign is +1, < 0 when sign is −1.
    let rows: [(&[usize], i64, i64); 9] = [
        (&[C4, UP], 0, 1),        // x4 up, linked variable above is 1
        (&[C1, C41], 0, 1),       // x1 up with x4 = 1, lower block at rest
        (&[C3, C34], 0, 1),       // x3 up with x4 = 1
        (&[C4, C41, C34], 0, -1), // x4 down with x1 = x3 = 1
        (&[C1], w, -1),           // x1 down, lower x4 = 1
        (&[C2, C23], 0, 1),       // x2 up with x3 = 1
        (&[C3, C23], 0, -1),      // x3 down with x2 = 1
        (&[C1, C12], 0, 1),       // x1 up with x2 = 1, lower block at rest
        (&[C2, C12], 0, -1),      // x2 down with x1 = 1
    ];
    let cap = w
        .checked_mul(4)
        .and_then(|v| v.checked_add(64))
        .ok_or(Error::Overflow("treewidth2_counting weight bound"))?;
    let mut best: Option<(i64, [i64; UNKNOWNS])> = None;
    for pattern in 0u32..(1 << UNKNOWNS) {
        let sign = |k: usize| if pattern >> k & 1 == 1 { -1 } else { 1 };
        let mut ip = IntegerProgram::new();
        for _ in 0..UNKNOWNS {
            ip.add_variable(1, cap, 1);
        }
        for (vars, constant, dir) in rows.iter() {
            // dir·(Σ sign·m + constant) ≥ 1  ⇔  −dir·Σ sign·m ≤ dir·constant − 1
            let terms = vars.iter().map(|&k| (k, -dir * sign(k)));
            ip.add_row(terms, Relation::LessEq, dir * constant - 1);
        }
        match ip.solve(&SolveOptions::default()) {
            Ok(sol) => {
                if best.as_ref().is_none_or(|(obj, _)| sol.objective < *obj) {
                    let signed: [i64; UNKNOWNS] = core::array::from_fn(|k| sign(k) * sol.values[k]);
                    best = Some((sol.objective, signed));
                }
            }
            Err(Error::Infeasible) => {}
            Err(e) => return Err(e),
        }
    }
    let (_, c) = best.ok_or_else(|| {
        Error::GeneratorInvariant(format!("no block weights exist for lower link weight {w}"))
    })?;
    Ok(([c[C1], c[C2], c[C3], c[C4], c[C12], c[C23], c[C34], c[C41]], c[UP]))
}

/// Chain of `K` four-cycles on `4K + 1` Boolean variables. Block `i` uses
/// variables `4i+1..4i+4` (1-based); its fourth variable is linked to the
/// first variable of block `i + 1`, and the last block links to the final
/// variable `n`, which has unary table `(1, −w_K)`.
pub fn treewidth2_counting(k: usize) -> Result<Treewidth2Counting> {
    if k < 1 {
        return Err(invalid("treewidth2_counting needs K ≥ 1"));
    }
    let n = 4 * k + 1;
    let mut link_weights = vec![0i64];
    let mut block_weights_all = Vec::with_capacity(k);
    for _ in 0..k {
        let (c, up) = block_weights(*link_weights.last().unwrap_or(&0))?;
        block_weights_all.push(c);
        link_weights.push(up);
    }
    let mut constraints = Vec::new();
    for (i, c) in block_weights_all.iter().enumerate() {
        let b = 4 * i;
        for (local, &weight) in c[..4].iter().enumerate() {
            constraints.push(Constraint::unary(b + local, vec![0, weight]));
        }
        constraints.push(Constraint::binary(b, b + 1, vec![0, 0, 0, c[4]])?);
        constraints.push(Constraint::binary(b + 1, b + 2, vec![0, 0, 0, c[5]])?);
        constraints.push(Constraint::binary(b + 2, b + 3, vec![0, 0, 0, c[6]])?);
        constraints.push(Constraint::binary(b, b + 3, vec![0, 0, 0, c[7]])?);
        constraints.push(Constraint::binary(b + 3, b + 4, vec![0, 0, 0, link_weights[i + 1]])?);
    }
    constraints.push(Constraint::unary(n - 1, vec![1, -link_weights[k]]));
    let instance = VcspInstance::boolean(n, constraints)?.with_name(format!("treewidth2_counting({k})"));

    let mut bags = Vec::new();
    let mut tree_edges = Vec::new();
    for i in 0..k {
        let b = 4 * i;
        let lower = bags.len();
        bags.push(vec![b, b + 1, b + 2]);
        bags.push(vec![b, b + 2, b + 3]);
        tree_edges.push((lower, lower + 1));
        // Link bag between this block's fourth variable and the next first one.
        bags.push(vec![b + 3, b + 4]);
        tree_edges.push((lower + 1, lower + 2));
        if i + 1 < k {
            tree_edges.push((lower + 2, lower + 3));
        }
    }
    let built = Treewidth2Counting {
        instance,
        link_weights,
        block_weights: block_weights_all,
        decomposition: TreeDecomposition { bags, tree_edges },
    };
    if k <= 3 {
        let trace = treewidth2_cascade(&built)?;
        let drops = flips_down(&trace, 0);
        if drops != 1usize << k {
            return Err(Error::GeneratorInvariant(format!(
                "variable 1 flips 1→0 {drops} times, expected {}",
                1usize << k
            )));
        }
    }
    Ok(built)
}

/// Number of `1 → 0` flips of `var` along a trace.
pub fn flips_down(trace: &Trace, var: usize) -> usize {
    trace
        .flips()
        .iter()
        .filter(|m| m.var == var && m.value == 0)
        .count()
}

/// The cascade from all-zeros with `x_n = 1`: the top block rises, `x_n`
/// drops, the top block falls, and every flip of a block's first variable
/// first replays the block below with the new value.
pub fn treewidth2_cascade(built: &Treewidth2Counting) -> Result<Trace> {
    let n = built.instance.n();
    let k = (n - 1) / 4;
    let mut x = vec![0usize; n];
    x[n - 1] = 1;
    let mut path = vec![Assignment(x.clone())];
    fn run(block: usize, rising: bool, x: &mut Vec<usize>, path: &mut Vec<Assignment>) {
        let moves: &[(usize, usize)] = if rising { &RISE } else { &FALL };
        for &(local, value) in moves {
            x[4 * block + local - 1] = value;
            path.push(Assignment(x.clone()));
            if local == 1 && block > 0 {
                run(block - 1, value == 1, x, path);
            }
        }
    }
    run(k - 1, true, &mut x, &mut path);
    x[n - 1] = 0;
    path.push(Assignment(x.clone()));
    run(k - 1, false, &mut x, &mut path);
    Trace::from_assignments(&built.instance, path)
        .map_err(|e| Error::GeneratorInvariant(format!("treewidth2 cascade is not improving: {e}")))
}

/// Star gadget for subset sum on `n + 2` Boolean variables: unary `(0, 1)` on
/// variables `1..=n+1`, unary `(0, −(3t + 1))` on the centre `n + 2`, edge
/// `{i, n+2}` with `[0 0; 0 3s_i]` for `i ≤ n`, and `{n+1, n+2}` with
/// `[0 0; 0 2]`.
pub fn subsetsum_star(s: &[i64], t: i64) -> Result<VcspInstance> {
    if s.is_empty() || s.iter().any(|&v| v <= 0) || t <= 0 {
        return Err(invalid("subsetsum_star needs a nonempty list of positive integers and a positive target"));
    }
    let n = s.len();
    let centre = n + 1;
    let big = t
        .checked_mul(3)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("subsetsum_star target"))?;
    let mut constraints: Vec<Constraint> = (0..=n).map(|i| Constraint::unary(i, vec![0, 1])).collect();
    constraints.push(Constraint::unary(centre, vec![0, -big]));
    for (i, &v) in s.iter().enumerate() {
        let w = v.checked_mul(3).ok_or(Error::Overflow("subsetsum_star weight"))?;
        constraints.push(Constraint::binary(i, centre, vec![0, 0, 0, w])?);
    }
    constraints.push(Constraint::binary(n, centre, vec![0, 0, 0, 2])?);
    Ok(VcspInstance::boolean(n + 2, constraints)?.with_name("subsetsum_star"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shape {
    /// Uniformly random labelled tree.
    Tree,
    /// `1 – 2 – … – n`.
    Path,
    /// `1 – 2 – … – n – 1`.
    Cycle,
    /// Every pair independently with this probability.
    Random(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// Unary `(0, c)` and binary `[0 … 0; 0 … c]` tables.
    Simple,
    /// Every table entry drawn independently.
    General,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub shape: Shape,
    /// Inclusive weight range; zero is never drawn.
    pub min_weight: i64,
    pub max_weight: i64,
    pub form: Form,
    pub domain: usize,
    pub seed: u64,
}

impl RandomSpec {
    /// Boolean, general tables, weights in `−5..=5`.
    pub fn new(n: usize, shape: Shape, seed: u64) -> Self {
        Self {
            n,
            shape,
            min_weight: -5,
            max_weight: 5,
            form: Form::General,
            domain: 2,
            seed,
        }
    }
}

fn prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &code {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &code {
        let leaf = (0..n).find(|&u| degree[u] == 1).unwrap_or(0);
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Deterministic random instance: one unary constraint per variable and one
/// binary constraint per edge of the chosen shape.
pub fn random_instance(spec: &RandomSpec) -> Result<VcspInstance> {
    if spec.n < 1 || spec.domain < 2 {
        return Err(invalid("random instances need n ≥ 1 and domain size ≥ 2"));
    }
    if spec.min_weight > spec.max_weight || (spec.min_weight == 0 && spec.max_weight == 0) {
        return Err(invalid("the weight range must contain a nonzero integer"));
    }
    if spec.form == Form::Simple && spec.domain != 2 {
        return Err(invalid("simple form needs Boolean domains"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut edges = match spec.shape {
        Shape::Tree => prufer_tree(n, &mut rng),
        Shape::Path => (1..n).map(|v| (v - 1, v)).collect(),
        Shape::Cycle => {
            if n < 3 {
                return Err(invalid("a cycle needs n ≥ 3"));
            }
            let mut e: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
            e.push((0, n - 1));
            e
        }
        Shape::Random(density) => {
            if !(0.0..=1.0).contains(&density) {
                return Err(invalid("density must lie in [0, 1]"));
            }
            let mut e = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen::<f64>() < density {
                        e.push((a, b));
                    }
                }
            }
            e
        }
    };
    edges.sort_unstable();
    let nonzero: Vec<i64> = (spec.min_weight..=spec.max_weight).filter(|&v| v != 0).collect();
    let draw = |rng: &mut ChaCha8Rng| *nonzero.choose(rng).unwrap_or(&1);
    let d = spec.domain;
    let mut constraints = Vec::with_capacity(n + edges.len());
    for i in 0..n {
        let table = match spec.form {
            Form::Simple => vec![0, draw(&mut rng)],
            Form::General => (0..d).map(|_| draw(&mut rng)).collect(),
        };
        constraints.push(Constraint::unary(i, table));
    }
    for &(a, b) in &edges {
        let table = match spec.form {
            Form::Simple => vec![0, 0, 0, draw(&mut rng)],
            Form::General => (0..d * d).map(|_| draw(&mut rng)).collect(),
        };
        constraints.push(Constraint::binary(a, b, table)?);
    }
    VcspInstance::new(vec![d; n], constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgraph::ConstraintGraph;
    use crate::graph::FitnessGraph;
    use alloc::string::{String, ToString};

    #[test]
    fn quadratic_path_tables() {
        let q = quadratic_path(4).unwrap();
        assert_eq!(q.constraints().len(), 4);
        assert!(q.constraints().iter().any(|c| c.scope() == [2, 3] && c.values() == [3, 0, 0, 3]));
        assert!(q.constraints().iter().any(|c| c.scope() == [3] && c.values() == [0, 4]));
        assert_eq!(quadratic_path_start(5).to_string(), "10101");
        assert!(quadratic_path(1).is_err());
    }

    #[test]
    fn domain3_schedule_counts_to_all_ones() {
        let s = domain3_counting_schedule(3);
        assert_eq!(s.first().unwrap().to_string(), "0000");
        assert_eq!(s.last().unwrap().to_string(), "0111");
        // From 0011: trailing ones become ▷ (shown as 2), the 0 becomes 1, then ▷ → 0.
        let shown: Vec<_> = s.iter().map(|a| a.to_string()).collect();
        let at = shown.iter().position(|a| a == "0011").unwrap();
        assert_eq!(&shown[at..at + 6], ["0011", "0021", "0022", "0122", "0120", "0100"].map(String::from));
        let inst = domain3_counting(4).unwrap();
        assert!(domain3_counting_trace(&inst, 4).unwrap().len() > 1 << 4);
    }

    #[test]
    fn domain3_smallest_instance() {
        let inst = domain3_counting(1).unwrap();
        let g = FitnessGraph::build(&inst, 64).unwrap();
        assert!(g.longest_improving_path().length >= 2);
    }

    #[test]
    fn treewidth2_single_block_follows_the_listed_transitions() {
        let b = treewidth2_counting(1).unwrap();
        assert_eq!(b.link_weights, vec![0, 10]);
        assert_eq!(b.block_weights[0], [-1, -3, -5, -9, 2, 4, 6, 2]);
        let trace = treewidth2_cascade(&b).unwrap();
        // Block written x4 x3 x2 x1, then x_n.
        let shown: Vec<String> = trace
            .assignments()
            .iter()
            .map(|a| {
                let x = &a.0;
                format!("{}{}{}{} {}", x[3], x[2], x[1], x[0], x[4])
            })
            .collect();
        assert_eq!(
            shown,
            [
                "0000 1", "1000 1", "1001 1", "1101 1", "1101 0", "0101 0", "0100 0", "0110 0",
                "0010 0", "0011 0", "0001 0", "0000 0"
            ]
        );
    }

    #[test]
    fn treewidth2_structure() {
        let b = treewidth2_counting(3).unwrap();
        let g = ConstraintGraph::of_instance(&b.instance).unwrap();
        assert_eq!(b.instance.n(), 13);
        assert_eq!(g.max_degree(), 3);
        assert_eq!(b.decomposition.validate(&g).unwrap(), 2);
        assert_eq!(b.link_weights, vec![0, 10, 30, 70]);
        assert_eq!(flips_down(&treewidth2_cascade(&b).unwrap(), 0), 8);
    }

    #[test]
    fn subsetsum_star_shape() {
        let s = subsetsum_star(&[3, 5, 7], 8).unwrap();
        let g = ConstraintGraph::of_instance(&s).unwrap();
        assert_eq!(g.edges(), &[(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert!(subsetsum_star(&[], 1).is_err());
        assert!(subsetsum_star(&[1, -2], 1).is_err());
    }

    #[test]
    fn random_instances_are_reproducible_and_shaped() {
        let spec = RandomSpec::new(9, Shape::Tree, 11);
        let a = random_instance(&spec).unwrap();
        assert_eq!(a, random_instance(&spec).unwrap());
        assert!(ConstraintGraph::of_instance(&a).unwrap().is_tree());
        let cyc = random_instance(&RandomSpec::new(6, Shape::Cycle, 1)).unwrap();
        let g = ConstraintGraph::of_instance(&cyc).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.max_degree(), 2);
        let mut simple = RandomSpec::new(5, Shape::Random(0.5), 3);
        simple.form = Form::Simple;
        let s = random_instance(&simple).unwrap();
        assert!(s.constraints().iter().all(|c| c.values()[..c.values().len() - 1].iter().all(|&v| v == 0)));
    }
}

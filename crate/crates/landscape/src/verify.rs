//! The reproduction suite behind `verify-paper`.
//!
//! Every criterion is exact and deterministic given the seed. Criteria run on
//! separate threads but are reported in numeric order, so the report text is
//! identical across runs.

use std::collections::BTreeMap;
use std::thread;

use landscape_core::cgraph::ConstraintGraph;
use landscape_core::dynamics::{
    encouragement_embedding_failure, encouragement_forest, run_search, verify_trace_properties,
    EncouragementForest, PolicyKind, SearchPolicy, GAIN_POSITIVE_SINCE_ENCOURAGER,
    ONLY_FIRST_FLIP_COURAGEOUS, FOREST_MATCHES_DEFINITION,
};
use landscape_core::gen::{
    self, domain3_counting, flips_down, quadratic_path, quadratic_path_start, random_instance,
    subsetsum_star, treewidth2_cascade, treewidth2_counting, Form, RandomSpec, Shape,
};
use landscape_core::span::{minimize_span, span};
use landscape_core::{
    fitness_table, magnitude_equivalent, sign_equivalent, simplify, trim, Assignment, AssignmentSpace,
    Constraint, FitnessFunction, FitnessGraph, SimpleInstance, VcspInstance, DEFAULT_MAX_VERTICES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Identifier and one-line description of every criterion, in report order.
pub const CRITERIA: [(u32, &str); 13] = [
    (1, "two instances implementing [1,2,2,3] share one simple form"),
    (2, "simplification preserves fitness and yields the smallest constraint graph"),
    (3, "trim preserves the fitness graph, is idempotent and fixes weight signs"),
    (4, "star gadget sign interaction decides subset sum"),
    (5, "improving paths are no longer than the span"),
    (6, "the simple trim form costs at most a factor of four in span"),
    (7, "span minimisation is exact and sign-preserving"),
    (8, "degree-2 instances minimise to at most n(n+1)"),
    (9, "trees admit improving paths of length at most C(n,2)+n"),
    (10, "leftmost-first search on the 4-variable quadratic path"),
    (11, "encouragement forest properties on random traces"),
    (12, "domain-3 counter has an improving path of length at least 2^n"),
    (13, "treewidth-2 Boolean cascade doubles its flips per block"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).unwrap_or_default();
        s.push('\n');
        s
    }

    /// One line per criterion.
    pub fn summary_lines(&self) -> Vec<String> {
        self.criteria.iter().map(summary_line).collect()
    }
}

pub fn summary_line(c: &CriterionResult) -> String {
    format!(
        "criterion {:>2} [{}] {}: {}",
        c.id,
        if c.passed { "PASS" } else { "FAIL" },
        c.title,
        c.detail
    )
}

type Outcome = Result<String, String>;

/// Runs one criterion. Unknown ids fail.
pub fn run_criterion(id: u32, seed: u64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let outcome = match id {
        1 => magnitude_pair(),
        2 => simplification(&mut rng),
        3 => trimming(&mut rng),
        4 => subset_sum(&mut rng),
        5 => span_bounds_paths(&mut rng),
        6 => factor_four(&mut rng),
        7 => span_minimisation(&mut rng),
        8 => degree_two_envelope(&mut rng),
        9 => tree_bound(&mut rng),
        10 => eleven_step_path(),
        11 => trace_properties(&mut rng),
        12 => domain3_counter(),
        13 => treewidth2(),
        _ => Err(format!("unknown criterion {id}")),
    };
    let title = CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .map_or("unknown", |(_, t)| t);
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id,
        title,
        passed,
        detail,
    }
}

/// Runs the listed criteria (all of them when `only` is empty) concurrently.
pub fn verify(seed: u64, only: &[u32]) -> VerifyReport {
    let ids: Vec<u32> = CRITERIA
        .iter()
        .map(|(id, _)| *id)
        .filter(|id| only.is_empty() || only.contains(id))
        .collect();
    let criteria: Vec<CriterionResult> = thread::scope(|s| {
        let handles: Vec<_> = ids
            .iter()
            .map(|&id| s.spawn(move || run_criterion(id, seed)))
            .collect();
        handles
            .into_iter()
            .zip(&ids)
            .map(|(h, &id)| {
                h.join().unwrap_or_else(|_| CriterionResult {
                    id,
                    title: "panicked",
                    passed: false,
                    detail: "the criterion panicked".into(),
                })
            })
            .collect()
    });
    let passed = criteria.iter().filter(|c| c.passed).count();
    VerifyReport {
        seed,
        passed,
        failed: criteria.len() - passed,
        criteria,
    }
}

fn core<T>(r: landscape_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{} ({})", e, e.code()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_shape(rng: &mut ChaCha8Rng, n: usize) -> Shape {
    match rng.gen_range(0..4) {
        0 => Shape::Tree,
        1 => Shape::Path,
        2 if n >= 3 => Shape::Cycle,
        _ => Shape::Random(rng.gen_range(0.2..0.6)),
    }
}

/// Random binary Boolean instance with general tables.
fn random_binary(rng: &mut ChaCha8Rng, n_max: usize) -> Result<VcspInstance, String> {
    let n = rng.gen_range(2..=n_max);
    let shape = random_shape(rng, n);
    core(random_instance(&RandomSpec::new(n, shape, rng.gen())))
}

fn boolean_table(f: &impl FitnessFunction) -> Vec<i64> {
    let space = AssignmentSpace::new(f.domains(), DEFAULT_MAX_VERTICES).expect("small instance");
    fitness_table(f, &space)
}

fn edge_set(instance: &VcspInstance) -> Result<Vec<(usize, usize)>, String> {
    Ok(core(ConstraintGraph::of_instance(instance))?.edges().to_vec())
}

fn magnitude_pair() -> Outcome {
    let unary = core(VcspInstance::boolean(
        2,
        vec![
            Constraint::nullary(1),
            Constraint::unary(0, vec![0, 1]),
            Constraint::unary(1, vec![0, 1]),
        ],
    ))?;
    let binary = core(VcspInstance::boolean(
        2,
        vec![core(Constraint::binary(0, 1, vec![1, 2, 2, 3]))?],
    ))?;
    for inst in [&unary, &binary] {
        let table = boolean_table(inst);
        ensure(table == [1, 2, 2, 3], || format!("fitness table {table:?}"))?;
    }
    ensure(core(magnitude_equivalent(&unary, &binary, DEFAULT_MAX_VERTICES))?.equal(), || {
        "the pair is not magnitude-equivalent".into()
    })?;
    ensure(edge_set(&unary)? != edge_set(&binary)?, || {
        "the pair has identical constraint graphs".into()
    })?;
    let (a, b) = (core(simplify(&unary))?, core(simplify(&binary))?);
    ensure(a == b, || format!("simple forms differ: {a:?} vs {b:?}"))?;
    Ok(format!(
        "table [1,2,2,3]; simple form C0={}, c1={}, c2={}, {} binary weights",
        a.constant(),
        a.unary_weight(0),
        a.unary_weight(1),
        a.binary().len()
    ))
}

/// Same fitness function, more constraints: a separable table `u(x_i) + v(x_j)`
/// is added on a pair and cancelled by unary terms.
fn reformulate(rng: &mut ChaCha8Rng, instance: &VcspInstance) -> Result<VcspInstance, String> {
    let n = instance.n();
    let mut tables: BTreeMap<Vec<usize>, Vec<i64>> = instance
        .constraints()
        .iter()
        .map(|c| (c.scope().to_vec(), c.values().to_vec()))
        .collect();
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        let u = [rng.gen_range(-4..=4), rng.gen_range(-4..=4)];
        let v = [rng.gen_range(-4..=4), rng.gen_range(-4..=4)];
        let t = tables.entry(vec![i, j]).or_insert_with(|| vec![0; 4]);
        for a in 0..2 {
            for b in 0..2 {
                t[2 * a + b] += u[a] + v[b];
            }
        }
        let ti = tables.entry(vec![i]).or_insert_with(|| vec![0; 2]);
        ti[0] -= u[0];
        ti[1] -= u[1];
        let tj = tables.entry(vec![j]).or_insert_with(|| vec![0; 2]);
        tj[0] -= v[0];
        tj[1] -= v[1];
    }
    let cs = tables
        .into_iter()
        .map(|(scope, values)| Constraint::new(scope, values))
        .collect::<landscape_core::Result<Vec<_>>>();
    core(VcspInstance::boolean(n, core(cs)?))
}

fn simplification(rng: &mut ChaCha8Rng) -> Outcome {
    let mut containments = 0usize;
    let mut extra_edges = 0usize;
    for k in 0..1000 {
        let inst = random_binary(rng, 10)?;
        let simple = core(simplify(&inst))?;
        let eq = core(magnitude_equivalent(&inst, &simple, DEFAULT_MAX_VERTICES))?;
        ensure(eq.equal(), || format!("instance {k}: simplify changed fitness at {:?}", eq.first_divergence))?;
        let other = reformulate(rng, &inst)?;
        ensure(core(magnitude_equivalent(&inst, &other, DEFAULT_MAX_VERTICES))?.equal(), || {
            format!("instance {k}: reformulation is not magnitude-equivalent")
        })?;
        let wide = edge_set(&other)?;
        for e in simple.edges() {
            ensure(wide.contains(&e), || {
                format!("instance {k}: edge {{{},{}}} of the simple form missing from a reformulation", e.0 + 1, e.1 + 1)
            })?;
        }
        ensure(core(simplify(&other))? == simple, || {
            format!("instance {k}: reformulation simplifies differently")
        })?;
        containments += 1;
        extra_edges += wide.len() - simple.edges().count();
    }
    Ok(format!(
        "1000 instances magnitude-equivalent to their simple form; {containments} reformulations \
         contain the simple edge set ({extra_edges} extra edges in total)"
    ))
}

/// `k·T` plus a few unit weights.
fn pad(rng: &mut ChaCha8Rng, t: &SimpleInstance) -> Result<SimpleInstance, String> {
    let n = t.n();
    let k = rng.gen_range(2..=5);
    let mut unary: BTreeMap<usize, i64> = t.unary().iter().map(|(&i, &c)| (i, k * c)).collect();
    let mut binary: BTreeMap<(usize, usize), i64> =
        t.binary().iter().map(|(&e, &c)| (e, k * c)).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let w = if rng.gen_bool(0.5) { 1 } else { -1 };
        if rng.gen_bool(0.25) {
            *unary.entry(rng.gen_range(0..n)).or_default() += w;
        } else {
            let i = rng.gen_range(0..n - 1);
            let j = rng.gen_range(i + 1..n);
            *binary.entry((i, j)).or_default() += w;
        }
    }
    core(SimpleInstance::new(
        n,
        k * t.constant(),
        unary.into_iter().filter(|&(_, c)| c != 0),
        binary.into_iter().filter(|&(_, c)| c != 0),
    ))
}

fn sign_agreement(t: &SimpleInstance, p: &SimpleInstance) -> Result<(), String> {
    for i in 0..t.n() {
        ensure(t.unary_weight(i).signum() == p.unary_weight(i).signum(), || {
            format!("unary sign differs at variable {}", i + 1)
        })?;
    }
    for (i, j) in t.edges() {
        ensure(t.binary_weight(i, j).signum() == p.binary_weight(i, j).signum(), || {
            format!("binary sign differs on {{{},{}}}", i + 1, j + 1)
        })?;
    }
    Ok(())
}

fn trimming(rng: &mut ChaCha8Rng) -> Outcome {
    let mut removed = 0usize;
    let mut pairs = 0usize;
    for k in 0..500 {
        let inst = random_binary(rng, 10)?;
        let simple = core(simplify(&inst))?;
        let t = core(trim(&simple, DEFAULT_MAX_VERTICES))?;
        let eq = core(sign_equivalent(&inst, &t, DEFAULT_MAX_VERTICES))?;
        ensure(eq.equal(), || format!("instance {k}: trim changed the fitness graph at {:?}", eq.first_divergence))?;
        ensure(core(trim(&t, DEFAULT_MAX_VERTICES))? == t, || format!("instance {k}: trim is not idempotent"))?;
        removed += simple.edges().count() - t.edges().count();
        let mut padded = Vec::new();
        for _ in 0..2 {
            let p = pad(rng, &t)?;
            if core(sign_equivalent(&t, &p, DEFAULT_MAX_VERTICES))?.equal() {
                sign_agreement(&t, &p).map_err(|m| format!("instance {k}: {m}"))?;
                padded.push(p);
            }
        }
        if let [a, b] = padded.as_slice() {
            sign_agreement(&t, a).and(sign_agreement(&t, b)).map_err(|m| format!("instance {k}: {m}"))?;
            for (i, j) in t.edges() {
                ensure(a.binary_weight(i, j).signum() == b.binary_weight(i, j).signum(), || {
                    format!("instance {k}: padded pair disagrees on {{{},{}}}", i + 1, j + 1)
                })?;
            }
            pairs += 1;
        }
    }
    ensure(pairs > 0, || "no padded pair was sign-equivalent; the sign check is vacuous".into())?;
    Ok(format!(
        "500 instances: trim sign-equivalent and idempotent ({removed} edges removed); \
         signs agree on {pairs} independently padded pairs"
    ))
}

fn subset_sum_oracle(s: &[i64], t: i64) -> bool {
    (1u32..1 << s.len()).any(|mask| {
        s.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v)
            .sum::<i64>()
            == t
    })
}

fn subset_sum(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut yes, mut no) = (0, 0);
    for k in 0..50 {
        let n = rng.gen_range(1..=8);
        let s: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
        let total: i64 = s.iter().sum();
        let t = if rng.gen_bool(0.5) {
            let picked: i64 = s.iter().filter(|_| rng.gen_bool(0.5)).sum();
            if picked == 0 { s[0] } else { picked }
        } else {
            rng.gen_range(1..=total + 5)
        };
        let inst = core(subsetsum_star(&s, t))?;
        let interact = core(landscape_core::sign_interact(&inst, n, n + 1, DEFAULT_MAX_VERTICES))?;
        let expected = subset_sum_oracle(&s, t);
        ensure(interact == expected, || {
            format!("instance {k} s={s:?} t={t}: sign interaction {interact}, subset sum {expected}")
        })?;
        if expected {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("50 gadgets agree with brute force ({yes} yes, {no} no)"))
}

fn span_bounds_paths(rng: &mut ChaCha8Rng) -> Outcome {
    let mut tight = 0usize;
    let mut ternary = 0usize;
    for k in 0..500 {
        let domain = if rng.gen_bool(0.3) { 3 } else { 2 };
        let n_max = if domain == 3 { 7 } else { 12 };
        let n = rng.gen_range(2..=n_max);
        let mut spec = RandomSpec::new(n, random_shape(rng, n), rng.gen());
        spec.domain = domain;
        let inst = core(random_instance(&spec))?;
        let g = core(FitnessGraph::build(&inst, 4096))?;
        let longest = g.longest_improving_path().length as i64;
        let s = span(&inst);
        ensure(longest <= s, || format!("instance {k}: longest path {longest} exceeds span {s}"))?;
        tight += usize::from(longest == s);
        ternary += usize::from(domain == 3);
    }
    Ok(format!("500 instances ({ternary} ternary), longest path ≤ span; {tight} with equality"))
}

fn factor_four(rng: &mut ChaCha8Rng) -> Outcome {
    let xor = core(VcspInstance::boolean(2, vec![core(Constraint::binary(0, 1, vec![0, 1, 1, 0]))?]))?;
    let xs = core(simplify(&xor))?;
    ensure(span(&xor) == 1 && xs.span() == 4, || {
        format!("XOR span {} simplifies to span {}", span(&xor), xs.span())
    })?;
    let mut worst = (0i64, 1i64);
    for k in 0..500 {
        let inst = random_binary(rng, 10)?;
        let t = core(trim(&core(simplify(&inst))?, DEFAULT_MAX_VERTICES))?;
        let (a, b) = (t.span(), span(&inst));
        ensure(a <= 4 * b, || format!("instance {k}: trimmed simple span {a} > 4 × {b}"))?;
        if a * worst.1 > worst.0 * b {
            worst = (a, b);
        }
    }
    Ok(format!(
        "XOR span 1 → 4; 500 instances within factor 4 (largest ratio {}/{})",
        worst.0, worst.1
    ))
}

fn unary_powers(n: usize) -> Result<VcspInstance, String> {
    core(VcspInstance::boolean(
        n,
        (0..n).map(|i| Constraint::unary(i, vec![0, 1 << (i + 1)])).collect(),
    ))
}

fn span_minimisation(rng: &mut ChaCha8Rng) -> Outcome {
    for n in 1..=8 {
        let r = core(minimize_span(&unary_powers(n)?, DEFAULT_MAX_VERTICES))?;
        ensure(r.minimized_span == n as i64, || {
            format!("unary powers of two on {n} variables minimise to {}", r.minimized_span)
        })?;
    }
    let xor = core(VcspInstance::boolean(2, vec![core(Constraint::binary(0, 1, vec![0, 1, 1, 0]))?]))?;
    let r = core(minimize_span(&xor, DEFAULT_MAX_VERTICES))?;
    ensure(r.minimized_span == 4, || format!("XOR minimises to {}", r.minimized_span))?;
    let mut saved = 0i64;
    let mut nodes = 0u64;
    for k in 0..200 {
        let n = rng.gen_range(2..=10);
        let shape = match rng.gen_range(0..4) {
            0 => Shape::Tree,
            1 => Shape::Path,
            2 if n >= 3 => Shape::Cycle,
            _ => Shape::Random(0.3),
        };
        let inst = core(random_instance(&RandomSpec::new(n, shape, rng.gen())))?;
        let r = core(minimize_span(&inst, DEFAULT_MAX_VERTICES))?;
        let eq = core(sign_equivalent(&inst, &r.minimized, DEFAULT_MAX_VERTICES))?;
        ensure(eq.equal(), || format!("instance {k}: minimised instance changes the fitness graph"))?;
        ensure(r.minimized_span <= r.trimmed_span, || {
            format!("instance {k}: minimised span {} above trimmed span {}", r.minimized_span, r.trimmed_span)
        })?;
        saved += r.trimmed_span - r.minimized_span;
        nodes += r.nodes;
    }
    Ok(format!(
        "unary n=1..8 → n, XOR → 4; 200 random instances sign-equivalent after minimisation \
         (total span reduction {saved}, {nodes} search nodes)"
    ))
}

fn degree_two_envelope(rng: &mut ChaCha8Rng) -> Outcome {
    // (span, bound, n) with the highest span / bound ratio.
    let mut largest = (0i64, 1i64, 0usize);
    for k in 0..200 {
        let n = rng.gen_range(3..=10);
        let mut spec = RandomSpec::new(n, if k % 2 == 0 { Shape::Path } else { Shape::Cycle }, rng.gen());
        spec.form = Form::Simple;
        spec.min_weight = -20;
        spec.max_weight = 20;
        let inst = core(random_instance(&spec))?;
        let r = core(minimize_span(&inst, DEFAULT_MAX_VERTICES))?;
        let bound = (n * (n + 1)) as i64;
        ensure(r.minimized_span <= bound, || {
            format!("instance {k} (n={n}): minimised span {} above n(n+1) = {bound}", r.minimized_span)
        })?;
        if r.minimized_span * largest.1 > largest.0 * bound {
            largest = (r.minimized_span, bound, n);
        }
    }
    Ok(format!(
        "200 path/cycle instances within n(n+1) (highest ratio: span {} of {} at n={})",
        largest.0, largest.1, largest.2
    ))
}

fn tree_bound(rng: &mut ChaCha8Rng) -> Outcome {
    let mut tight = 0usize;
    for k in 0..1000 {
        let n = rng.gen_range(2..=12);
        let inst = core(random_instance(&RandomSpec::new(n, Shape::Tree, rng.gen())))?;
        let longest = core(FitnessGraph::build(&inst, DEFAULT_MAX_VERTICES))?.longest_improving_path().length;
        let bound = n * (n - 1) / 2 + n;
        ensure(longest <= bound, || format!("instance {k} (n={n}): longest path {longest} > {bound}"))?;
        tight += usize::from(longest == bound);
    }
    for n in 2..=12 {
        let q = core(quadratic_path(n))?;
        let longest = core(FitnessGraph::build(&q, DEFAULT_MAX_VERTICES))?.longest_improving_path().length;
        let bound = n * (n - 1) / 2 + n;
        ensure(longest == bound, || format!("quadratic path n={n}: longest path {longest}, expected {bound}"))?;
    }
    Ok(format!(
        "1000 random trees within C(n,2)+n ({tight} attain it); quadratic path attains it for n=2..12"
    ))
}

pub(crate) const ELEVEN_STEPS: [&str; 11] = [
    "1010", "0010", "0110", "1110", "1100", "1000", "0000", "0001", "0011", "0111", "1111",
];
pub(crate) const ELEVEN_FLIPS: [&str; 10] =
    ["1↦0", "2↦1", "1↦1", "3↦0", "2↦0", "1↦0", "4↦1", "3↦1", "2↦1", "1↦1"];
pub(crate) const ELEVEN_CHAINS: [&str; 4] = [
    "⊥ ⇐ (1,1↦0)",
    "⊥ ⇐ (2,2↦1) ⇐ (3,1↦1)",
    "⊥ ⇐ (4,3↦0) ⇐ (5,2↦0) ⇐ (6,1↦0)",
    "⊥ ⇐ (7,4↦1) ⇐ (8,3↦1) ⇐ (9,2↦1) ⇐ (10,1↦1)",
];

fn eleven_step_path() -> Outcome {
    let q = core(quadratic_path(4))?;
    let start = quadratic_path_start(4);
    let trace = core(run_search(&q, &start, SearchPolicy::new(PolicyKind::First)))?;
    let shown: Vec<String> = trace.assignments().iter().map(Assignment::to_string).collect();
    ensure(shown == ELEVEN_STEPS, || format!("assignments {shown:?}"))?;
    ensure(trace.fitness() == (0..=10).collect::<Vec<i64>>(), || {
        format!("fitness {:?}", trace.fitness())
    })?;
    let flips = trace.flip_table();
    ensure(flips == ELEVEN_FLIPS, || format!("flip table {flips:?}"))?;
    let chains = core(encouragement_forest(&q, &trace))?.chains(&trace);
    ensure(chains == ELEVEN_CHAINS, || format!("chains {chains:?}"))?;
    Ok(format!("{}; chains {}", shown.join(" → "), chains.join(" | ")))
}

fn negative_controls() -> Result<String, String> {
    let q = core(quadratic_path(4))?;
    let trace = core(run_search(&q, &quadratic_path_start(4), SearchPolicy::new(PolicyKind::First)))?;
    let forest = core(encouragement_forest(&q, &trace))?;
    let mut controls = Vec::new();
    // Step 3 re-parented onto step 1, which does not support it.
    let mut parents = forest.parents().to_vec();
    parents[2] = Some(0);
    controls.push((parents, GAIN_POSITIVE_SINCE_ENCOURAGER));
    // Step 3 made courageous although position 1 already flipped at step 1.
    let mut parents = forest.parents().to_vec();
    parents[2] = None;
    controls.push((parents, ONLY_FIRST_FLIP_COURAGEOUS));
    let mut parents = forest.parents().to_vec();
    parents[9] = Some(7);
    controls.push((parents, FOREST_MATCHES_DEFINITION));
    let mut shown = Vec::new();
    for (parents, name) in controls {
        let corrupted = core(EncouragementForest::from_parents(parents))?;
        let report = core(verify_trace_properties(&q, &trace, &corrupted))?;
        let check = report.check(name).ok_or_else(|| format!("missing check {name}"))?;
        ensure(!check.passed && !check.witness.is_empty(), || {
            format!("negative control for {name} was not detected")
        })?;
        let w: Vec<String> = check.witness.iter().map(|t| (t + 1).to_string()).collect();
        shown.push(format!("{name} at steps [{}]", w.join(",")));
    }
    Ok(shown.join("; "))
}

fn trace_properties(rng: &mut ChaCha8Rng) -> Outcome {
    let controls = negative_controls()?;
    let mut failures: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut first_failure: Option<String> = None;
    let mut embedding_failures = 0usize;
    let mut steps = 0usize;
    for k in 0..10_000 {
        let n = rng.gen_range(2..=10);
        let inst = core(random_instance(&RandomSpec::new(n, Shape::Tree, rng.gen())))?;
        let start = Assignment((0..n).map(|_| rng.gen_range(0..2)).collect());
        let kind = match k % 4 {
            0 => PolicyKind::Steepest,
            1 => PolicyKind::First,
            2 => PolicyKind::Random(rng.gen()),
            _ => PolicyKind::Worst,
        };
        let trace = core(run_search(&inst, &start, SearchPolicy::new(kind)))?;
        steps += trace.steps();
        let forest = core(encouragement_forest(&inst, &trace))?;
        let report = core(verify_trace_properties(&inst, &trace, &forest))?;
        for check in report.failed() {
            *failures.entry(check.name).or_default() += 1;
            if first_failure.is_none() {
                let w: Vec<String> = check.witness.iter().map(|t| (t + 1).to_string()).collect();
                first_failure = Some(format!(
                    "trace {k} (n={n}, start {start}, {kind:?}): {} at steps [{}]: {}",
                    check.name,
                    w.join(","),
                    check.detail
                ));
            }
        }
        let graph = core(ConstraintGraph::of_instance(&inst))?;
        embedding_failures += usize::from(encouragement_embedding_failure(&trace, &forest, &graph).is_some());
    }
    let total: usize = failures.values().sum();
    if total == 0 && embedding_failures == 0 {
        Ok(format!(
            "10000 traces ({steps} flips) pass every check; negative controls: {controls}"
        ))
    } else {
        let counts: Vec<String> = failures.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        Err(format!(
            "{total} failed checks over 10000 traces ({}); {embedding_failures} encouragement paths \
             leave the constraint graph; first: {}; negative controls: {controls}",
            counts.join(", "),
            first_failure.unwrap_or_default()
        ))
    }
}

fn domain3_counter() -> Outcome {
    let inst = core(domain3_counting(6))?;
    let path = core(FitnessGraph::build(&inst, DEFAULT_MAX_VERTICES))?.longest_improving_path();
    ensure(path.length >= 64, || format!("longest improving path {} < 64", path.length))?;
    let schedule = core(gen::domain3_counting_trace(&inst, 6))?;
    Ok(format!(
        "3^7 vertices, longest improving path {}; counting schedule takes {} steps",
        path.length,
        schedule.steps()
    ))
}

fn treewidth2() -> Outcome {
    let built = core(treewidth2_counting(3))?;
    let graph = core(ConstraintGraph::of_instance(&built.instance))?;
    ensure(graph.max_degree() == 3, || format!("maximum degree {}", graph.max_degree()))?;
    let width = core(built.decomposition.validate(&graph))?;
    ensure(width <= 2, || format!("decomposition width {width}"))?;
    let longest = core(FitnessGraph::build(&built.instance, DEFAULT_MAX_VERTICES))?
        .longest_improving_path()
        .length;
    ensure(longest >= 8, || format!("longest improving path {longest} < 8"))?;
    let cascade = core(treewidth2_cascade(&built))?;
    let drops = flips_down(&cascade, 0);
    ensure(drops >= 8, || format!("variable 1 flips 1→0 only {drops} times"))?;
    Ok(format!(
        "13 variables, max degree 3, decomposition width {width}, longest improving path {longest}, \
         cascade of {} steps flips variable 1 down {drops} times (weights w = {:?})",
        cascade.steps(),
        built.link_weights
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        for id in [1, 10, 12, 13] {
            let r = run_criterion(id, 0);
            assert!(r.passed, "{}", summary_line(&r));
        }
    }

    #[test]
    fn oracle_decides_subset_sum() {
        assert!(subset_sum_oracle(&[3, 5, 7], 8));
        assert!(!subset_sum_oracle(&[3, 5, 7], 4));
        assert!(subset_sum_oracle(&[2], 2));
    }

    #[test]
    fn reformulation_keeps_the_fitness_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_binary(&mut rng, 6).unwrap();
        let other = reformulate(&mut rng, &inst).unwrap();
        assert_eq!(boolean_table(&inst), boolean_table(&other));
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(99, 0).passed);
    }
}

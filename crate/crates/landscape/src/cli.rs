//! Command-line surface.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use landscape_core::dynamics::{
    encouragement_forest, gain, run_search, verify_trace_properties, PolicyKind, SearchPolicy,
    DEFAULT_STEP_LIMIT,
};
use landscape_core::gen::{self, Form, RandomSpec, Shape};
use landscape_core::span::{minimize_span, span, span_of_arity};
use landscape_core::{
    fitness_table, magnitude_equivalent, sign_equivalent, simplify, trim_with_report, AssignmentSpace,
    EquivalenceReport, FitnessFunction, FitnessGraph, VcspInstance, DEFAULT_MAX_VERTICES,
};
use serde_json::{json, Value};

use crate::error::{exit, CliError, Result};
use crate::format::{parse_assignment, parse_instance, serialize_instance, trace_from_jsonl, trace_to_jsonl};
use crate::report;
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "landscape", version, about = "Fitness landscapes of valued constraint instances")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Instance file; standard input when absent.
    #[arg(short, long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_STEP_LIMIT)]
    pub step_limit: usize,
    #[arg(long, global = true, value_enum, default_value_t = Policy::First)]
    pub policy: Policy,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Lift the vertex and step budgets.
    #[arg(long, global = true)]
    pub force: bool,
}

impl RunConfig {
    fn max_vertices(&self) -> usize {
        if self.force {
            usize::MAX
        } else {
            self.max_vertices
        }
    }

    fn step_limit(&self) -> usize {
        if self.force {
            usize::MAX
        } else {
            self.step_limit
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Steepest,
    First,
    Random,
    Worst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquivKind {
    Magnitude,
    Sign,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fitness of the given assignments, or the whole table when none are given.
    Eval { assignments: Vec<String> },
    /// Simple normal form as an instance file.
    Simplify,
    /// Simple form with non-interacting edges removed, as an instance file.
    Trim,
    /// Trimmed simple form together with the removed edges and witnesses.
    Normalize,
    /// Span, in total and per arity.
    Span,
    /// Minimal-span sign-equivalent simple instance.
    Minspan,
    /// Vertex, edge, local optimum and longest path statistics.
    GraphStats,
    /// Length of the longest improving path.
    LongestPath {
        /// Print the witness path as well.
        #[arg(long)]
        witness: bool,
    },
    /// Local search from a start assignment; the trace is JSON Lines.
    Search {
        /// Start assignment; all zeros when absent.
        #[arg(long)]
        start: Option<String>,
    },
    /// Flip, gain, encouragement and property report for a trace file.
    AnalyzeTrace {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Compares the input with a second instance.
    Equiv {
        #[arg(long, value_enum, default_value_t = EquivKind::Sign)]
        kind: EquivKind,
        #[arg(long)]
        other: PathBuf,
    },
    /// Whether two variables (1-based) sign-interact, with witnesses.
    SignInteract { i: usize, j: usize },
    /// Writes a generated instance.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Runs the reproduction suite and reports one result per criterion.
    VerifyPaper {
        /// Restrict to these criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Boolean path whose longest improving path has n(n+1)/2 steps.
    #[command(name = "quadratic_path")]
    QuadraticPath { n: usize },
    /// Three-valued counter on n + 1 variables.
    #[command(name = "domain3_counting")]
    Domain3Counting { n: usize },
    /// Chain of k four-cycles on 4k + 1 Boolean variables.
    #[command(name = "treewidth2_counting")]
    Treewidth2Counting { k: usize },
    /// Star gadget for a subset sum instance.
    #[command(name = "subsetsum_star")]
    SubsetsumStar {
        /// Target sum.
        t: i64,
        /// The multiset of positive values.
        #[arg(required = true)]
        values: Vec<i64>,
    },
    /// Seeded random instance of the chosen shape.
    #[command(name = "random")]
    Random {
        n: usize,
        #[arg(long, value_enum, default_value_t = ShapeArg::Tree)]
        shape: ShapeArg,
        /// Edge probability for the random shape.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
        min_weight: i64,
        #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
        max_weight: i64,
        #[arg(long)]
        simple: bool,
        #[arg(long, default_value_t = 2)]
        domain: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Tree,
    Path,
    Cycle,
    Random,
}

/// Parses arguments, runs, reports errors as JSON on standard error and
/// returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { exit::VALIDATION } else { exit::SUCCESS };
            let _ = e.print();
            return status;
        }
    };
    match run(&cli) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_status()
        }
    }
}

fn read_path(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_instance(config: &RunConfig) -> Result<VcspInstance> {
    let text = match &config.input {
        Some(path) => read_path(path)?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io {
                path: "<stdin>".into(),
                source,
            })?;
            s
        }
    };
    parse_instance(&text)
}

fn emit(config: &RunConfig, text: &str) -> Result<()> {
    match &config.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn emit_json(config: &RunConfig, value: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).unwrap_or_default();
    s.push('\n');
    emit(config, &s)
}

fn policy(config: &RunConfig) -> SearchPolicy {
    let kind = match config.policy {
        Policy::Steepest => PolicyKind::Steepest,
        Policy::First => PolicyKind::First,
        Policy::Random => PolicyKind::Random(config.seed),
        Policy::Worst => PolicyKind::Worst,
    };
    SearchPolicy::new(kind).with_step_limit(config.step_limit())
}

/// Zero-based variable index from a 1-based argument.
fn variable(f: &VcspInstance, v: usize) -> Result<usize> {
    if v == 0 || v > f.n() {
        return Err(CliError::ScopeRange { var: v, n: f.n() });
    }
    Ok(v - 1)
}

pub fn run(cli: &Cli) -> Result<i32> {
    let config = &cli.config;
    match &cli.command {
        Command::Eval { assignments } => {
            let f = read_instance(config)?;
            let rows: Vec<(String, i64)> = if assignments.is_empty() {
                let space = AssignmentSpace::new(f.domains(), config.max_vertices())?;
                fitness_table(&f, &space)
                    .into_iter()
                    .enumerate()
                    .map(|(code, v)| (space.decode(code).to_string(), v))
                    .collect()
            } else {
                assignments
                    .iter()
                    .map(|a| {
                        let x = parse_assignment(&f, a)?;
                        Ok((x.to_string(), f.evaluate(&x)?))
                    })
                    .collect::<Result<_>>()?
            };
            match config.format {
                OutputFormat::Json => emit_json(
                    config,
                    &Value::Array(
                        rows.iter()
                            .map(|(a, v)| json!({"assignment": a, "fitness": v}))
                            .collect(),
                    ),
                )?,
                OutputFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["assignment", "fitness"])?;
                    for (a, v) in &rows {
                        w.write_record([a.as_str(), &v.to_string()])?;
                    }
                    emit(config, &report::csv_text(w)?)?;
                }
            }
        }
        Command::Simplify => {
            let f = read_instance(config)?;
            let s = simplify(&f)?;
            emit(config, &serialize_instance(&report::named(s.to_vcsp(), &f, "simplified")))?;
        }
        Command::Trim => {
            let f = read_instance(config)?;
            let r = trim_with_report(&simplify(&f)?, config.max_vertices())?;
            emit(config, &serialize_instance(&report::named(r.instance.to_vcsp(), &f, "trimmed")))?;
        }
        Command::Normalize => {
            let f = read_instance(config)?;
            let r = trim_with_report(&simplify(&f)?, config.max_vertices())?;
            emit_json(config, &report::normalize(&f, &r))?;
        }
        Command::Span => {
            let f = read_instance(config)?;
            let by_arity: serde_json::Map<String, Value> = (0..=f.arity())
                .map(|a| (a.to_string(), json!(span_of_arity(&f, a))))
                .collect();
            emit_json(config, &json!({"span": span(&f), "by_arity": by_arity}))?;
        }
        Command::Minspan => {
            let f = read_instance(config)?;
            let r = minimize_span(&f, config.max_vertices())?;
            emit_json(config, &report::minspan(&f, &r))?;
        }
        Command::GraphStats => {
            let f = read_instance(config)?;
            let g = FitnessGraph::build(&f, config.max_vertices())?;
            let stats = report::GraphStats::of(&g);
            match config.format {
                OutputFormat::Json => emit_json(config, &stats.to_json())?,
                OutputFormat::Csv => emit(config, &stats.to_csv()?)?,
            }
        }
        Command::LongestPath { witness } => {
            let f = read_instance(config)?;
            let g = FitnessGraph::build(&f, config.max_vertices())?;
            let path = g.longest_improving_path();
            let mut text = format!("{}\n", path.length);
            if *witness {
                for &code in &path.witness {
                    text.push_str(&g.space().decode(code).to_string());
                    text.push('\n');
                }
            }
            emit(config, &text)?;
        }
        Command::Search { start } => {
            let f = read_instance(config)?;
            let x = match start {
                Some(s) => parse_assignment(&f, s)?,
                None => landscape_core::Assignment::zeros(f.n()),
            };
            let trace = run_search(&f, &x, policy(config))?;
            emit(config, &trace_to_jsonl(&trace))?;
            if trace.truncated {
                eprintln!(
                    "{}",
                    json!({"warning": "STEP_LIMIT", "message": format!("stopped after {} steps before reaching a local optimum", trace.steps())})
                );
            }
        }
        Command::AnalyzeTrace { trace } => {
            let f = read_instance(config)?;
            let t = trace_from_jsonl(&f, &read_path(trace)?)?;
            let forest = encouragement_forest(&f, &t)?;
            let props = verify_trace_properties(&f, &t, &forest)?;
            let gains = t
                .flips()
                .iter()
                .enumerate()
                .map(|(s, m)| gain(&f, &t.assignments()[s], m.var, m.value))
                .collect::<landscape_core::Result<Vec<_>>>()?;
            emit_json(config, &report::trace_analysis(&t, &gains, &forest, &props))?;
            if !props.all_passed() {
                return Ok(exit::PROPERTY);
            }
        }
        Command::Equiv { kind, other } => {
            let a = read_instance(config)?;
            let b = parse_instance(&read_path(other)?)?;
            let r: EquivalenceReport = match kind {
                EquivKind::Magnitude => magnitude_equivalent(&a, &b, config.max_vertices())?,
                EquivKind::Sign => sign_equivalent(&a, &b, config.max_vertices())?,
            };
            emit_json(config, &report::equivalence(&r))?;
        }
        Command::SignInteract { i, j } => {
            let f = read_instance(config)?;
            let (a, b) = (variable(&f, *i)?, variable(&f, *j)?);
            let g = FitnessGraph::build(&f, config.max_vertices())?;
            let ab = g.sign_depends(a, b)?;
            let ba = g.sign_depends(b, a)?;
            emit_json(
                config,
                &json!({
                    "i": i,
                    "j": j,
                    "interact": ab.is_some() || ba.is_some(),
                    "i_depends_on_j": ab.map(|d| d.witness.to_string()),
                    "j_depends_on_i": ba.map(|d| d.witness.to_string()),
                }),
            )?;
        }
        Command::Gen { family } => {
            let inst = generate(family, config.seed)?;
            emit(config, &serialize_instance(&inst))?;
        }
        Command::VerifyPaper { only } => {
            let report = verify::verify(config.seed, only);
            for line in report.summary_lines() {
                eprintln!("{line}");
            }
            match config.format {
                OutputFormat::Json => emit(config, &report.to_json())?,
                OutputFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["id", "title", "passed", "detail"])?;
                    for c in &report.criteria {
                        w.write_record([c.id.to_string(), c.title.to_string(), c.passed.to_string(), c.detail.clone()])?;
                    }
                    emit(config, &report::csv_text(w)?)?;
                }
            }
            if !report.all_passed() {
                return Ok(exit::PROPERTY);
            }
        }
    }
    Ok(exit::SUCCESS)
}

fn generate(family: &Family, seed: u64) -> Result<VcspInstance> {
    Ok(match family {
        Family::QuadraticPath { n } => gen::quadratic_path(*n)?,
        Family::Domain3Counting { n } => gen::domain3_counting(*n)?,
        Family::Treewidth2Counting { k } => gen::treewidth2_counting(*k)?.instance,
        Family::SubsetsumStar { t, values } => gen::subsetsum_star(values, *t)?,
        Family::Random {
            n,
            shape,
            density,
            min_weight,
            max_weight,
            simple,
            domain,
        } => {
            let shape = match shape {
                ShapeArg::Tree => Shape::Tree,
                ShapeArg::Path => Shape::Path,
                ShapeArg::Cycle => Shape::Cycle,
                ShapeArg::Random => Shape::Random(*density),
            };
            let spec = RandomSpec {
                n: *n,
                shape,
                min_weight: *min_weight,
                max_weight: *max_weight,
                form: if *simple { Form::Simple } else { Form::General },
                domain: *domain,
                seed,
            };
            gen::random_instance(&spec)?.with_name(format!("random(n={n}, seed={seed})"))
        }
    })
}

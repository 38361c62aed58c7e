//! JSON and CSV projections of analysis results. Variables are 1-based.

use landscape_core::dynamics::{EncouragementForest, PropertyReport, Trace};
use landscape_core::span::MinimizeReport;
use landscape_core::{
    Divergence, EquivalenceKind, EquivalenceReport, FitnessGraph, SimpleInstance, TrimReport,
    VcspInstance,
};
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::format::serialize_instance;

fn edge(e: (usize, usize)) -> Value {
    json!([e.0 + 1, e.1 + 1])
}

/// Carries the source name over with a suffix.
pub fn named(instance: VcspInstance, source: &VcspInstance, suffix: &str) -> VcspInstance {
    match source.name() {
        Some(name) => instance.with_name(format!("{name} ({suffix})")),
        None => instance,
    }
}

fn instance_json(instance: &VcspInstance) -> Value {
    serde_json::from_str(&serialize_instance(instance)).unwrap_or(Value::Null)
}

fn weights(s: &SimpleInstance) -> Value {
    json!({
        "constant": s.constant(),
        "unary": s.unary().iter().map(|(&i, &c)| json!([i + 1, c])).collect::<Vec<_>>(),
        "binary": s.binary().iter().map(|(&(i, j), &c)| json!([i + 1, j + 1, c])).collect::<Vec<_>>(),
    })
}

pub fn normalize(source: &VcspInstance, r: &TrimReport) -> Value {
    json!({
        "instance": instance_json(&named(r.instance.to_vcsp(), source, "trimmed")),
        "removed_edges": r.removed.iter().copied().map(edge).collect::<Vec<_>>(),
        "retained": r.retained.iter().map(|d| json!({
            "edge": edge((d.dependent.min(d.on), d.dependent.max(d.on))),
            "dependent": d.dependent + 1,
            "on": d.on + 1,
            "witness": d.witness.to_string(),
        })).collect::<Vec<_>>(),
    })
}

pub fn minspan(source: &VcspInstance, r: &MinimizeReport) -> Value {
    json!({
        "original_span": r.original_span,
        "simplified_span": r.simplified_span,
        "trimmed_span": r.trimmed_span,
        "minimized_span": r.minimized_span,
        "removed_edges": r.removed_edges.iter().copied().map(edge).collect::<Vec<_>>(),
        "weights": weights(&r.minimized),
        "solver": {"nodes": r.nodes},
        "instance": instance_json(&named(r.minimized.to_vcsp(), source, "minimised")),
    })
}

pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub local_optima: usize,
    pub longest_path: usize,
    pub witness: Vec<String>,
}

impl GraphStats {
    pub fn of(g: &FitnessGraph) -> Self {
        let path = g.longest_improving_path();
        Self {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            local_optima: g.local_optima().len(),
            longest_path: path.length,
            witness: path.witness.iter().map(|&c| g.space().decode(c).to_string()).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices,
            "edges": self.edges,
            "local_optima": self.local_optima,
            "longest_path": self.longest_path,
            "witness": self.witness,
        })
    }

    /// Header plus one row; the witness is space-separated.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["vertices", "edges", "local_optima", "longest_path", "witness"])?;
        w.write_record([
            self.vertices.to_string(),
            self.edges.to_string(),
            self.local_optima.to_string(),
            self.longest_path.to_string(),
            self.witness.join(" "),
        ])?;
        csv_text(w)
    }
}

pub fn csv_text(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: "<csv buffer>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

pub fn trace_analysis(
    trace: &Trace,
    gains: &[i64],
    forest: &EncouragementForest,
    props: &PropertyReport,
) -> Value {
    let flips: Vec<Value> = trace
        .flips()
        .iter()
        .zip(gains)
        .enumerate()
        .map(|(t, (m, g))| json!({"t": t + 1, "flip": m.to_string(), "gain": g}))
        .collect();
    json!({
        "steps": trace.steps(),
        "flips": flips,
        "parents": forest.parents().iter().map(|p| p.map(|t| t + 1)).collect::<Vec<_>>(),
        "roots": forest.roots().iter().map(|t| t + 1).collect::<Vec<_>>(),
        "chains": forest.chains(trace),
        "properties": props.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "witness": c.witness.iter().map(|t| t + 1).collect::<Vec<_>>(),
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "all_passed": props.all_passed(),
    })
}

pub fn equivalence(r: &EquivalenceReport) -> Value {
    let kind = match r.kind {
        EquivalenceKind::Magnitude => "magnitude",
        EquivalenceKind::Sign => "sign",
    };
    let divergence = match &r.first_divergence {
        None => Value::Null,
        Some(Divergence::Value { at, left, right }) => {
            json!({"assignment": at.to_string(), "left": left, "right": right})
        }
        Some(Divergence::Move {
            from,
            var,
            value,
            improving_in_left,
        }) => json!({
            "from": from.to_string(),
            "flip": format!("{}↦{}", var + 1, value),
            "improving_in_left": improving_in_left,
        }),
    };
    json!({"kind": kind, "equivalent": r.equal(), "first_divergence": divergence})
}

//! Instance files, trace files and assignment strings.
//!
//! Variables are 1-based in every file and report; the core crate is 0-based.

use std::fmt::Write as _;

use landscape_core::dynamics::Trace;
use landscape_core::{Assignment, Constraint, FitnessFunction, VcspInstance};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    domains: Vec<usize>,
    constraints: Vec<ConstraintFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintFile {
    scope: Vec<usize>,
    values: Vec<i64>,
}

/// Parses an instance file. Each structural problem has its own error code.
pub fn parse_instance(text: &str) -> Result<VcspInstance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(CliError::MalformedJson)?;
    if file.domains.len() != file.n {
        return Err(landscape_core::Error::DomainCount {
            expected: file.n,
            found: file.domains.len(),
        }
        .into());
    }
    let mut constraints = Vec::with_capacity(file.constraints.len());
    for c in file.constraints {
        if let Some(&v) = c.scope.iter().find(|&&v| v == 0 || v > file.n) {
            return Err(CliError::ScopeRange { var: v, n: file.n });
        }
        let scope: Vec<usize> = c.scope.iter().map(|v| v - 1).collect();
        constraints.push(Constraint::new(scope, c.values)?);
    }
    let instance = VcspInstance::new(file.domains, constraints)?;
    Ok(match file.name {
        Some(name) => instance.with_name(name),
        None => instance,
    })
}

/// Canonical text: constraints in canonical order, one per line.
pub fn serialize_instance(instance: &VcspInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"n\": {},", instance.n());
    let _ = writeln!(out, "  \"domains\": {},", json_list(instance.domains().iter()));
    if instance.constraints().is_empty() {
        let _ = write!(out, "  \"constraints\": []");
    } else {
        let _ = writeln!(out, "  \"constraints\": [");
        let last = instance.constraints().len() - 1;
        for (k, c) in instance.constraints().iter().enumerate() {
            let _ = write!(
                out,
                "    {{\"scope\": {}, \"values\": {}}}",
                json_list(c.scope().iter().map(|v| v + 1)),
                json_list(c.values().iter())
            );
            out.push_str(if k == last { "\n" } else { ",\n" });
        }
        let _ = write!(out, "  ]");
    }
    if let Some(name) = instance.name() {
        let quoted = serde_json::to_string(name).unwrap_or_default();
        let _ = write!(out, ",\n  \"name\": {quoted}");
    }
    out.push_str("\n}\n");
    out
}

fn json_list<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    let parts: Vec<String> = items.map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Parses an assignment string and checks it against the instance.
pub fn parse_assignment<F: FitnessFunction + ?Sized>(f: &F, text: &str) -> Result<Assignment> {
    let x: Assignment = text.parse()?;
    f.check_assignment(x.values())?;
    Ok(x)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub assignment: String,
    pub fitness: i64,
    /// The flip leaving this assignment, `(i↦b)`; absent on the last record.
    pub flip: Option<String>,
}

/// One JSON object per line; `step` is 1-based.
pub fn trace_to_jsonl(trace: &Trace) -> String {
    let mut out = String::new();
    for (t, (x, fit)) in trace.assignments().iter().zip(trace.fitness()).enumerate() {
        let record = TraceRecord {
            step: t + 1,
            assignment: x.to_string(),
            fitness: *fit,
            flip: trace.flips().get(t).map(|m| format!("({m})")),
        };
        out.push_str(&serde_json::to_string(&record).unwrap_or_default());
        out.push('\n');
    }
    out
}

/// Reads the assignments back; fitness and flips are recomputed and checked
/// against the instance.
pub fn trace_from_jsonl<F: FitnessFunction + ?Sized>(f: &F, text: &str) -> Result<Trace> {
    let mut assignments = Vec::new();
    let mut recorded = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let r: TraceRecord = serde_json::from_str(line).map_err(CliError::MalformedJson)?;
        assignments.push(parse_assignment(f, &r.assignment)?);
        recorded.push(r);
    }
    let trace = Trace::from_assignments(f, assignments)?;
    for (t, r) in recorded.iter().enumerate() {
        if r.step != t + 1 || r.fitness != trace.fitness()[t] {
            return Err(landscape_core::Error::InvalidTrace {
                step: t,
                reason: "recorded step index or fitness does not match the instance",
            }
            .into());
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use landscape_core::gen::quadratic_path;

    #[test]
    fn canonical_text_round_trips() {
        let q = quadratic_path(4).unwrap();
        let text = serialize_instance(&q);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, q);
        assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn nullary_and_unnamed_instances() {
        let text = r#"{"n": 1, "domains": [3], "constraints": [{"scope": [], "values": [7]}]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.evaluate(&Assignment(vec![2])).unwrap(), 7);
        let canonical = serialize_instance(&inst);
        assert!(!canonical.contains("name"));
        assert_eq!(parse_instance(&canonical).unwrap(), inst);
    }

    #[test]
    fn structural_errors_have_distinct_codes() {
        let cases = [
            ("{\"n\": 2", "MALFORMED_JSON"),
            (r#"{"n": 2, "domains": [2], "constraints": []}"#, "DOMAIN_COUNT"),
            (
                r#"{"n": 2, "domains": [2, 2], "constraints": [{"scope": [1, 2], "values": [0, 0, 1]}]}"#,
                "TABLE_SIZE",
            ),
            (
                r#"{"n": 2, "domains": [2, 2], "constraints": [{"scope": [2, 1], "values": [0, 0, 0, 1]}]}"#,
                "SCOPE_ORDER",
            ),
            (
                r#"{"n": 2, "domains": [2, 2], "constraints": [{"scope": [3], "values": [0, 1]}]}"#,
                "SCOPE_RANGE",
            ),
            (
                r#"{"n": 2, "domains": [2, 2], "constraints": [{"scope": [0], "values": [0, 1]}]}"#,
                "SCOPE_RANGE",
            ),
            (
                r#"{"n": 1, "domains": [2], "constraints": [{"scope": [1], "values": [0, 1]}, {"scope": [1], "values": [1, 0]}]}"#,
                "DUPLICATE_SCOPE",
            ),
        ];
        for (text, code) in cases {
            assert_eq!(parse_instance(text).unwrap_err().code(), code, "{text}");
        }
    }

    #[test]
    fn trace_round_trip() {
        let q = quadratic_path(4).unwrap();
        let x = Assignment(vec![1, 0, 1, 0]);
        let t = landscape_core::dynamics::run_search(
            &q,
            &x,
            landscape_core::dynamics::SearchPolicy::new(landscape_core::dynamics::PolicyKind::First),
        )
        .unwrap();
        let text = trace_to_jsonl(&t);
        assert!(text.starts_with(r#"{"step":1,"assignment":"1010","fitness":0,"flip":"(1↦0)"}"#));
        let back = trace_from_jsonl(&q, &text).unwrap();
        assert_eq!(back.assignments(), t.assignments());
        let tampered = text.replacen("\"fitness\":0", "\"fitness\":5", 1);
        assert_eq!(trace_from_jsonl(&q, &tampered).unwrap_err().code(), "INVALID_TRACE");
    }
}

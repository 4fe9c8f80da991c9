//! Report envelopes and renderers.

use hicat_core::ncat::{CellId, ExchangeWitness, MultiCategory};
use hicat_core::report::{Law, Scope, ValidationReport};
use serde::Serialize;

use crate::catfile::ParseError;

pub const SCHEMA: u32 = 1;

/// What a command produced: the exit code and both streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tol: f64,
    pub samples: usize,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    ok: bool,
    config: RunConfig,
    #[serde(flatten)]
    body: T,
}

pub fn json<T: Serialize>(command: &str, ok: bool, config: RunConfig, body: T) -> String {
    let env = Envelope { schema: SCHEMA, command, ok, config, body };
    let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: ErrorDetail<'a>,
}

#[derive(Serialize)]
struct ErrorDetail<'a> {
    kind: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    message: &'a str,
}

/// A JSON diagnostic for a failure that stops the command (exit 2).
pub fn error_json(command: &str, config: RunConfig, kind: &str, parse: Option<&ParseError>, message: &str) -> String {
    let detail = ErrorDetail {
        kind,
        file: parse.map(|p| p.file.as_str()),
        line: parse.map(|p| p.line).filter(|&l| l > 0),
        message,
    };
    json(command, false, config, ErrorBody { error: detail })
}

pub fn usage_error(message: &str) -> String {
    #[derive(Serialize)]
    struct Usage<'a> {
        schema: u32,
        command: &'a str,
        ok: bool,
        error: ErrorDetail<'a>,
    }
    let first = message.lines().next().unwrap_or("").trim();
    let u = Usage {
        schema: SCHEMA,
        command: "usage",
        ok: false,
        error: ErrorDetail { kind: "usage", file: None, line: None, message: first },
    };
    let mut s = serde_json::to_string_pretty(&u).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedViolation {
    pub law: Law,
    pub scope: Scope,
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn names<B: MultiCategory + ?Sized>(base: &B, cells: &[CellId]) -> Vec<String> {
    cells.iter().map(|&c| base.cell_name(c).to_string()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub ok: bool,
    pub violations: Vec<NamedViolation>,
    pub suppressed: usize,
}

impl CheckResult {
    pub fn new<B: MultiCategory + ?Sized>(check: &str, base: &B, report: &ValidationReport) -> Self {
        CheckResult {
            check: check.to_string(),
            ok: report.is_ok(),
            violations: report
                .violations
                .iter()
                .map(|v| NamedViolation { law: v.law, scope: v.scope, witness: names(base, &v.witness), note: v.note.clone() })
                .collect(),
            suppressed: report.suppressed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedExchangeWitness {
    pub q: usize,
    pub p: usize,
    pub x: String,
    pub y: String,
    pub w: String,
    pub z: String,
    /// `(x ∘_p y) ∘_q (w ∘_p z)`.
    pub lhs: String,
    /// `(x ∘_q w) ∘_p (y ∘_q z)`, absent when undefined.
    pub rhs: Option<String>,
}

impl NamedExchangeWitness {
    pub fn new<B: MultiCategory + ?Sized>(base: &B, w: &ExchangeWitness) -> Self {
        let n = |c: CellId| base.cell_name(c).to_string();
        NamedExchangeWitness { q: w.q, p: w.p, x: n(w.x), y: n(w.y), w: n(w.w), z: n(w.z), lhs: n(w.lhs), rhs: w.rhs.map(n) }
    }
}

/// Shortest fixed-point rendering with at most 12 decimals, always with a
/// decimal point: `2.0`, `0.5`, `1.414213562373`.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let mut s = format!("{v:.12}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.push('0');
    }
    if s == "-0.0" {
        s = "0.0".into();
    }
    s
}

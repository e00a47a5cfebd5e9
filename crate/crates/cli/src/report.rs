//! Machine-readable check reports.

use std::fmt::Write as _;

use curvlab::IdentityReport;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub holds: bool,
    pub residual: f64,
    pub witness: String,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
}

impl CheckResult {
    pub fn new(
        name: impl Into<String>,
        holds: bool,
        residual: f64,
        witness: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            holds,
            residual,
            witness: witness.into(),
            details: Map::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }
}

impl From<&IdentityReport> for CheckResult {
    fn from(r: &IdentityReport) -> Self {
        CheckResult::new(r.name.clone(), r.holds, r.residual, r.witness.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub command: String,
    pub results: Vec<CheckResult>,
    pub status: i32,
    /// Extra lines shown in text output only.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            results: Vec::new(),
            status: 0,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, r: CheckResult) {
        self.results.push(r);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// Status 0 when every result holds, 1 otherwise.
    pub fn finish(mut self) -> Self {
        self.status = if self.results.iter().all(|r| r.holds) {
            0
        } else {
            1
        };
        self
    }

    pub fn usage_error(command: impl Into<String>, message: &str) -> Self {
        let mut r = Self::new(command);
        r.status = 2;
        r.note(format!("error: {message}"));
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let mark = if r.holds { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{mark}  {:<40} residual {:.3e}  witness {}",
                r.name, r.residual, r.witness
            );
            for (k, v) in &r.details {
                let _ = writeln!(out, "      {k}: {v}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        out
    }
}

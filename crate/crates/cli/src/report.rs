//! Human-readable and JSON reports.

use polyreal::certificate::format_complex;
use polyreal::{Certificate, ComplexMatrix, C64};
use serde::Serialize;
use serde_json::{Map, Value};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Everything consistent / all checks pass.
    Consistent = 0,
    /// A violation was found.
    Violation = 1,
    /// Usage, I/O or inconclusive evaluation.
    Error = 2,
}

#[derive(Debug, Serialize)]
pub struct Report {
    command: String,
    checks: Vec<Certificate>,
    values: Map<String, Value>,
    notes: Vec<String>,
    conclusion: String,
    outcome: Outcome,
    exit_code: i32,
    #[serde(skip)]
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            checks: Vec::new(),
            values: Map::new(),
            notes: Vec::new(),
            conclusion: String::new(),
            outcome: Outcome::Consistent,
            exit_code: 0,
            lines: Vec::new(),
        }
    }

    pub fn check(&mut self, cert: Certificate) -> bool {
        let pass = cert.is_pass();
        self.lines.push(cert.to_string());
        self.checks.push(cert);
        pass
    }

    pub fn value(&mut self, name: &str, v: f64) {
        self.lines.push(format!("{name} = {v}"));
        self.values.insert(name.to_string(), serde_json::json!(v));
    }

    pub fn point(&mut self, name: &str, z: &[C64]) {
        let text: Vec<String> = z.iter().map(|c| format_complex(*c)).collect();
        self.lines.push(format!("{name} = ({})", text.join(", ")));
        let pairs: Vec<[f64; 2]> = z.iter().map(|c| [c.re, c.im]).collect();
        self.values.insert(name.to_string(), serde_json::json!(pairs));
    }

    pub fn matrix(&mut self, name: &str, m: &ComplexMatrix) {
        self.lines.push(format!("{name} ="));
        for row in m.to_rows() {
            let text: Vec<String> = row.iter().map(|c| format_complex(*c)).collect();
            self.lines.push(format!("  [{}]", text.join(", ")));
        }
        self.values.insert(name.to_string(), serde_json::json!(m));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        let text = text.into();
        self.lines.push(format!("note: {text}"));
        self.notes.push(text);
    }

    pub fn finish(&mut self, outcome: Outcome, conclusion: impl Into<String>) {
        self.outcome = outcome;
        self.exit_code = outcome as i32;
        self.conclusion = conclusion.into();
    }

    /// Descriptions of the failing checks.
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.is_pass())
            .map(|c| c.description().to_string())
            .collect()
    }

    pub fn exit_code(&self) -> i32 {
        self.exit_code
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = format!("polyreal {}\n", self.command);
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("conclusion: {}\n", self.conclusion));
        out
    }
}

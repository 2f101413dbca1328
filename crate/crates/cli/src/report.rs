use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Output of one command. Contains no timings or addresses, so the JSON
/// rendering depends only on the workspace, the seed and the command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub seed: u64,
    pub results: Value,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.text(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {} (seed {})", self.command.join(" "), self.seed).unwrap();
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                text_value(&mut out, k, v, 1);
            }
        }
        // long harness runs list only the failing checks
        let verbose = self.checks.len() <= 20;
        for c in &self.checks {
            if verbose || !c.passed {
                let status = if c.passed { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    writeln!(out, "{status} {}", c.name).unwrap();
                } else {
                    writeln!(out, "{status} {}: {}", c.name, c.detail).unwrap();
                }
            }
        }
        writeln!(out, "{} of {} checks passed", self.checks.len() - self.failures(), self.checks.len()).unwrap();
        out
    }
}

fn text_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) if depth < 3 => {
            writeln!(out, "{pad}{key}:").unwrap();
            for (k, v) in map {
                text_value(out, k, v, depth + 1);
            }
        }
        Value::String(s) => writeln!(out, "{pad}{key}: {s}").unwrap(),
        other => writeln!(out, "{pad}{key}: {other}").unwrap(),
    }
}

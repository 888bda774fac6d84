//! Report assembly and rendering.  Output is deterministic: JSON
//! objects are sorted by key, CSV columns follow the declared order,
//! and nothing time- or environment-dependent is written.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub example: String,
    pub settings: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Map<String, Value>>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(example: &str) -> Report {
        Report {
            example: example.to_string(),
            settings: Map::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push_check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> String {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "status": if c.passed { "pass" } else { "fail" },
                    "detail": c.detail,
                })
            })
            .collect();
        let doc = json!({
            "example": self.example,
            "settings": self.settings,
            "columns": self.columns,
            "rows": self.rows,
            "checks": checks,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.checks.is_empty() {
            w.write_record(&self.columns).expect("header");
            for row in &self.rows {
                let record: Vec<String> = self
                    .columns
                    .iter()
                    .map(|c| row.get(c).map(cell).unwrap_or_default())
                    .collect();
                w.write_record(&record).expect("row");
            }
        } else {
            w.write_record(["check", "status", "detail"]).expect("header");
            for c in &self.checks {
                w.write_record([
                    c.name.as_str(),
                    if c.passed { "pass" } else { "fail" },
                    c.detail.as_str(),
                ])
                .expect("check row");
            }
        }
        String::from_utf8(w.into_inner().expect("csv buffer")).expect("csv is utf8")
    }

    /// Write the rendered report to `target`, or stdout when absent.
    pub fn emit(&self, format: Format, target: Option<&Path>) -> Result<(), CliError> {
        let text = self.render(format);
        match target {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

//! Record tables written as CSV or JSON.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::settings::{CliError, CliResult, OutputFormat};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// No value (a singular sample); empty in CSV, `null` in JSON.
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(command: &str, config: Vec<(String, String)>, columns: &[&str]) -> Self {
        Table {
            command: command.to_string(),
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str("# command=");
        s.push_str(&self.command);
        for (k, v) in &self.config {
            if v.contains(char::is_whitespace) {
                s.push_str(&format!(" {k}={v:?}"));
            } else {
                s.push_str(&format!(" {k}={v}"));
            }
        }
        s.push('\n');
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        if !self.summary.is_empty() {
            s.push_str("# summary");
            for (k, v) in &self.summary {
                s.push_str(&format!(" {k}={}", csv_cell(v)));
            }
            s.push('\n');
        }
        s
    }

    fn to_json(&self) -> String {
        let config: Map<String, Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), json_cell(v)))
                    .collect();
                Value::Object(m)
            })
            .collect();
        let mut doc = json!({
            "metadata": {
                "command": self.command,
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
            },
            "records": records,
        });
        if !self.summary.is_empty() {
            let m: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), json_cell(v))).collect();
            doc["summary"] = Value::Object(m);
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format_f64(*v),
        Cell::Text(t) => t.clone(),
        Cell::Missing => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Num(v) if v.is_finite() => json!(v),
        Cell::Num(_) | Cell::Missing => Value::Null,
        Cell::Text(t) => Value::String(t.clone()),
    }
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(text: &str, path: Option<&str>) -> CliResult<()> {
    match path {
        Some(p) if p != "-" => std::fs::write(p, text)
            .map_err(|e| CliError::validation(format!("--out: cannot write {p}: {e}"))),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::validation(format!("--out: cannot write to stdout: {e}")))
        }
    }
}

//! Report rendering. CSV reports open with `#` lines carrying the version,
//! command, seed and resolved configuration; JSON reports carry the same
//! values as top-level keys.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};

use crate::error::Result;
use crate::VERSION;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub struct Report {
    pub command: &'static str,
    pub seed: Option<u64>,
    pub config: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Rows as JSON objects; built from `header` and `rows` when absent.
    pub json_rows: Option<Value>,
    pub summary: Option<Value>,
}

impl Report {
    pub fn new(command: &'static str, seed: Option<u64>, config: Value, header: Vec<&'static str>) -> Self {
        Self {
            command,
            seed,
            config,
            header,
            rows: Vec::new(),
            json_rows: None,
            summary: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        writeln!(out, "# scjl {VERSION}")?;
        writeln!(out, "# command: {}", self.command)?;
        match self.seed {
            Some(seed) => writeln!(out, "# seed: {seed}")?,
            None => writeln!(out, "# seed: none")?,
        }
        writeln!(out, "# config: {}", serde_json::to_string(&self.config)?)?;
        if let Some(summary) = &self.summary {
            writeln!(out, "# summary: {}", serde_json::to_string(summary)?)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }

    fn render_json(&self) -> Result<Vec<u8>> {
        let rows = match &self.json_rows {
            Some(rows) => rows.clone(),
            None => Value::Array(
                self.rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(k, v)| (k.to_string(), json_scalar(v)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect(),
            ),
        };
        let mut doc = json!({
            "version": VERSION,
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "rows": rows,
        });
        if let Some(summary) = &self.summary {
            doc["summary"] = summary.clone();
        }
        let mut out = serde_json::to_vec_pretty(&doc)?;
        out.push(b'\n');
        Ok(out)
    }
}

/// Cells are rendered as numbers or booleans when they parse as such.
fn json_scalar(cell: &str) -> Value {
    if let Ok(b) = cell.parse::<bool>() {
        return Value::Bool(b);
    }
    if let Ok(i) = cell.parse::<i64>() {
        return Value::from(i);
    }
    match cell.parse::<f64>() {
        Ok(f) if f.is_finite() => Value::from(f),
        _ => Value::String(cell.to_string()),
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

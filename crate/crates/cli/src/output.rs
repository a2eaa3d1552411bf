//! Tabular results written as CSV or as a JSON bundle.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Uint(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Float)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    /// Shortest round-trip decimal for floats.
    fn csv_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Uint(v) => v.to_string(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Uint(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

#[derive(Serialize)]
struct Bundle<'a> {
    config: &'a ExperimentConfig,
    results: Value,
    version: &'static str,
    duration_ms: u128,
}

pub fn render(cfg: &ExperimentConfig, table: &Table, started: Instant) -> Result<Vec<u8>, CliError> {
    match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let bundle = Bundle {
                config: cfg,
                results: table.to_json_rows(),
                version: env!("CARGO_PKG_VERSION"),
                duration_ms: started.elapsed().as_millis(),
            };
            let mut bytes = serde_json::to_vec_pretty(&bundle).map_err(|e| CliError::Io(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

pub fn write_out(cfg: &ExperimentConfig, bytes: &[u8]) -> Result<(), CliError> {
    if cfg.out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(bytes)?;
        stdout.flush()?;
        return Ok(());
    }
    std::fs::write(&cfg.out, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", cfg.out)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_csv() {
        let mut t = Table::new(&["x"]);
        for x in [0.1 + 0.2, 1e-300, 123456789.0, -2.5e17] {
            t.push(vec![Cell::Float(x)]);
        }
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        let parsed: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
        assert_eq!(parsed, vec![0.1 + 0.2, 1e-300, 123456789.0, -2.5e17]);
    }

    #[test]
    fn json_rows_are_keyed_by_column() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Cell::Uint(3), Cell::Empty]);
        assert_eq!(t.to_json_rows(), json!([{"a": 3, "b": null}]));
    }
}

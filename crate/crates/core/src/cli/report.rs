// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Tabular command output and its CSV / JSON renderings.

use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Significant digits of every float written by the CLI.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Num)
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => json_float(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Scientific notation with [`SIGNIFICANT_DIGITS`] digits; `-0` prints as `0`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return format!("{:.*e}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    if !v.is_finite() {
        return v.to_string();
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
}

/// The float after rounding to [`SIGNIFICANT_DIGITS`]; non-finite values become `null`.
pub fn json_float(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format_float(v).parse().unwrap_or(v);
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// A command's result: metadata plus an ordered table.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    /// Written in order to the CSV comment line; sorted by key in JSON.
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Report {
            command,
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn comment_line(&self) -> String {
        let mut line = format!("# nic-engine {}", self.command);
        for (key, value) in &self.meta {
            // objects (the parameter set) are flattened one level
            let pairs: Vec<String> = match value {
                Value::Object(map) => map
                    .iter()
                    .map(|(k, v)| format!("{k}={}", plain(v)))
                    .collect(),
                v => vec![format!("{key}={}", plain(v))],
            };
            for pair in pairs {
                line.push(' ');
                line.push_str(&pair);
            }
        }
        line.replace(['\n', '\r'], " ")
    }

    fn to_csv(&self) -> Result<Vec<u8>> {
        let mut out = self.comment_line().into_bytes();
        out.push(b'\n');
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv)).map_err(io)?;
        }
        w.into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
    }

    fn to_json(&self) -> Result<Vec<u8>> {
        let mut meta = Map::new();
        meta.insert("command".into(), Value::from(self.command));
        for (key, value) in &self.meta {
            meta.insert(key.clone(), value.clone());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Object(meta));
        doc.insert("rows".into(), Value::Array(rows));
        let mut out =
            serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| Error::Io(e.into()))?;
        out.push(b'\n');
        Ok(out)
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format_float(n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

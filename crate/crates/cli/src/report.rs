// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{CliError, Result};
use crate::format::{format_g17, to_json_text};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

/// Plot-ready table; the CSV form of a report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn numeric(columns: Vec<String>, rows: Vec<Vec<f64>>) -> Self {
        Self {
            columns,
            rows: rows.into_iter().map(|r| r.into_iter().map(Cell::Number).collect()).collect(),
        }
    }

    pub fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    Value::Array(
                        row.iter()
                            .map(|cell| match cell {
                                Cell::Number(x) => number(*x),
                                Cell::Text(s) => Value::String(s.clone()),
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Number(x) => format_g17(*x),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// JSON number for a float; non-finite values become `null`.
pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    /// `sha256:` digest of every input that determines the outputs.
    pub inputs_digest: String,
    pub outputs: Value,
    pub table: Table,
    pub tool_version: String,
    /// Seconds; only recorded on request since it breaks byte-identity.
    pub wall_time: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(self.command.clone()));
        map.insert("inputs_digest".into(), Value::String(self.inputs_digest.clone()));
        map.insert("outputs".into(), self.outputs.clone());
        map.insert("tool_version".into(), Value::String(self.tool_version.clone()));
        if let Some(t) = self.wall_time {
            map.insert("wall_time".into(), number(t));
        }
        Value::Object(map)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json_text(&self.to_json()),
            Format::Csv => self.table.to_csv(),
        }
    }
}

/// Writes the report to `out`, or to stdout when `out` is `None`.
pub fn emit_report(report: &Report, format: Format, out: Option<&Path>) -> Result<()> {
    let text = report.render(format);
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

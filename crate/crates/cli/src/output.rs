//! CSV and JSON artifacts.
//!
//! CSV layout: `#`-prefixed metadata lines (tool version, float format, the run config as
//! JSON, run metadata), then a header row, then data rows. Floats are written in
//! scientific notation with 17 significant digits, so files are byte-reproducible.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::CliError;

pub const FLOAT_FORMAT: &str = "scientific, 17 significant digits";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Document {
    pub config: Value,
    pub metadata: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Document {
    pub fn new(config: Value, columns: Vec<&'static str>) -> Self {
        Self {
            config,
            metadata: Map::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_string(), value.into());
    }

    pub fn render_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        out.push_str(&format!("# vgl {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# float_format: {FLOAT_FORMAT}\n"));
        out.push_str(&format!("# config: {}\n", serde_json::to_string(&self.config)?));
        for (key, value) in &self.metadata {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::render))?;
        }
        let body = writer.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
        Ok(out)
    }

    pub fn render_json(&self) -> Result<String, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "float_format": "JSON numbers (shortest round-trip)",
            "config": self.config,
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": rows,
        });
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => File::create(p)
            .and_then(|mut f| f.write_all(text.as_bytes()))
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(CliError::Io),
    }
}

//! JSON and CSV rendering.
//!
//! JSON is the machine interface: one document per run, numbers printed in
//! the shortest form that round-trips to the same binary64. CSV is the
//! table interface: nested JSON objects are flattened into dotted column
//! names, in first-seen order.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command result: the JSON document and the rows of its CSV form.
#[derive(Debug, Clone)]
pub struct Document {
    pub json: Value,
    pub rows: Vec<Value>,
}

impl Document {
    /// A single-row document.
    pub fn single(json: Value) -> Self {
        Self {
            rows: vec![json.clone()],
            json,
        }
    }
}

pub fn emit(doc: &Document, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &doc.json)?;
            writeln!(sink)?;
        }
        Format::Csv => write_csv(&mut sink, &doc.rows)?,
    }
    sink.flush()?;
    Ok(())
}

fn write_csv(sink: &mut dyn Write, rows: &[Value]) -> anyhow::Result<()> {
    let flat: Vec<Vec<(String, String)>> = rows.iter().map(flatten).collect();
    let mut header: Vec<String> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(&header)?;
    for row in &flat {
        let record = header.iter().map(|h| {
            row.iter()
                .find(|(k, _)| k == h)
                .map(|(_, v)| v.as_str())
                .unwrap_or("")
        });
        w.write_record(record)?;
    }
    w.flush()?;
    Ok(())
}

fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    match value {
        Value::Object(map) => flatten_into("", map, &mut out),
        other => out.push(("value".to_string(), cell(other))),
    }
    out
}

fn flatten_into(prefix: &str, map: &Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (k, v) in map {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(inner) => flatten_into(&key, inner, out),
            other => out.push((key, cell(other))),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            // Debug switches to exponent notation for very small or large
            // magnitudes and round-trips like Display
            (_, _, Some(x)) => format!("{x:?}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
    }
}

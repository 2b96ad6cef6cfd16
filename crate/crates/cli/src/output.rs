use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    /// Value with the number of decimals used in CSV output.
    Num(f64, usize),
    Text(String),
    /// An undefined cell, `*` in CSV and `null` in JSON.
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v, d) => format!("{v:.d$}"),
            Cell::Text(s) => s.clone(),
            Cell::Missing => "*".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Num(v, _) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rectangular output with leading metadata. CSV puts each metadata pair on
/// a `# key: value` line above the header; JSON nests it under `"meta"`.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { meta: Vec::new(), columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> CliResult<()> {
        match format {
            Format::Csv => {
                for (k, v) in &self.meta {
                    writeln!(out, "# {k}: {v}")?;
                }
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                let rows: Vec<Value> =
                    self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
                serde_json::to_writer_pretty(&mut *out, &json!({ "meta": meta, "columns": self.columns, "rows": rows }))?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// A single named record: a one-row CSV, or a flat JSON object.
#[derive(Debug, Clone, Default)]
pub struct Record(pub Vec<(String, Cell)>);

impl Record {
    pub fn add(&mut self, key: &str, cell: impl Into<Cell>) -> &mut Self {
        self.0.push((key.into(), cell.into()));
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> CliResult<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(self.0.iter().map(|(k, _)| k))?;
                w.write_record(self.0.iter().map(|(_, c)| c.csv()))?;
                w.flush()?;
            }
            Format::Json => {
                let obj: Map<String, Value> = self.0.iter().map(|(k, c)| (k.clone(), c.json())).collect();
                serde_json::to_writer_pretty(&mut *out, &obj)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

//! Column tables and their CSV/JSON emission.
//!
//! CSV numbers carry 17 significant digits (`{:.16e}`), uncomputed values
//! are empty fields, lines end in LF. JSON is an array of objects with the
//! same keys in the same order; uncomputed or non-finite values are `null`.

use crate::CliError;
use serde_json::{Map, Number, Value as Json};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(Option<f64>),
    Bool(bool),
    Text(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Value {
        Value::Num(Some(x))
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Value {
        Value::Num(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Value {
        Value::Bool(b)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Value {
        Value::Text(s)
    }
}

/// Underflowed products can come out as −0; print them as 0.
fn unsigned_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Num(Some(x)) => format!("{:.16e}", unsigned_zero(*x)),
                    Value::Num(None) => String::new(),
                    Value::Bool(b) => b.to_string(),
                    Value::Text(s) => s.clone(),
                })
                .collect();
            w.write_record(&fields).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    pub fn to_json(&self) -> Vec<u8> {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, v) in self.columns.iter().zip(row) {
                    let j = match v {
                        Value::Num(Some(x)) => Number::from_f64(unsigned_zero(*x)).map_or(Json::Null, Json::Number),
                        Value::Num(None) => Json::Null,
                        Value::Bool(b) => Json::Bool(*b),
                        Value::Text(s) => Json::String(s.clone()),
                    };
                    obj.insert((*name).to_string(), j);
                }
                Json::Object(obj)
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&rows).expect("serializable");
        out.push(b'\n');
        out
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<(), CliError> {
        if self.rows.is_empty() {
            return Err(CliError::Runtime(format!("refusing to write an empty table to {}", path.display())));
        }
        std::fs::write(path, self.render(format)).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
    }
}

use std::io::Write;

use num_traits::ToPrimitive;
use serde_json::{Map, Value};
use weingarten::ExactScalar;

/// A command's result: top-level fields plus an optional table of rows.
#[derive(Debug, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

#[derive(Debug)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    /// `key` holds the exact fraction, `key_float` its floating-point rendering.
    pub fn exact(&mut self, key: &str, value: &ExactScalar) -> &mut Self {
        self.field(key, frac(value));
        self.field(&format!("{key}_float"), float(value))
    }

    pub fn to_json(&self, timing_ms: Option<f64>) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), self.command.clone().into());
        out.insert("inputs".into(), Value::Object(self.inputs.clone()));
        out.extend(self.fields.clone());
        if let Some(table) = &self.table {
            let rows = table
                .rows
                .iter()
                .map(|row| Value::Object(table.columns.iter().cloned().zip(row.iter().cloned()).collect()))
                .collect();
            out.insert("rows".into(), Value::Array(rows));
        }
        if let Some(ms) = timing_ms {
            out.insert("timing_ms".into(), ms.into());
        }
        Value::Object(out)
    }

    /// The table as CSV, or the top-level fields as a one-row table when there is none.
    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        match &self.table {
            Some(table) => {
                writer.write_record(&table.columns)?;
                for row in &table.rows {
                    writer.write_record(row.iter().map(cell))?;
                }
            }
            None => {
                writer.write_record(self.fields.keys())?;
                writer.write_record(self.fields.values().map(cell))?;
            }
        }
        writer.flush()?;
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `p/q` with `q > 0`, or `p` for integers.
pub fn frac(x: &ExactScalar) -> Value {
    Value::String(x.to_string())
}

pub fn float(x: &ExactScalar) -> Value {
    x.to_f64().map_or(Value::Null, Value::from)
}

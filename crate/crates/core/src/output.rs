//! Tabular output shared by the CLI: CSV with 12 significant digits and a
//! JSON envelope that mirrors the CSV columns.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1.0";

/// `v` rounded to 12 significant digits, printed in shortest form.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("valid float literal");
    // avoid "-0"
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

fn round_sig12(v: f64) -> f64 {
    format_sig12(v).parse().unwrap_or(v)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_sig12(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(round_sig12(*v)),
            Cell::Num(v) => json!(v.to_string()),
            Cell::Int(v) => json!(v),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

/// Rows under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
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
            .collect();
        json!({ "columns": self.columns, "rows": rows })
    }
}

/// Metadata wrapper of every JSON document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputEnvelope {
    pub schema_version: String,
    pub command: String,
    pub parameters: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub produced_at: Option<String>,
    pub payload: Value,
}

impl OutputEnvelope {
    pub fn new(command: &str, parameters: Map<String, Value>, payload: Value, timestamp: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            parameters,
            produced_at: timestamp.then(|| {
                chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
            }),
            payload,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(0.354_578_902_665_270_03), "0.354578902665");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(2.5e-7), "0.00000025");
    }

    #[test]
    fn formatting_is_idempotent() {
        for v in [0.123_456_789_012_345, 7.0e-13, 0.999_999_999_999_9, 42.0] {
            let once = format_sig12(v);
            assert_eq!(format_sig12(once.parse().unwrap()), once);
        }
    }

    #[test]
    fn csv_and_json_agree() {
        let mut t = Table::new(vec!["a", "ok"]);
        t.push(vec![Cell::Num(0.1 + 0.2), Cell::Bool(true)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,ok\n0.3,true\n");
        assert_eq!(t.to_json()["rows"][0]["a"], json!(0.3));
    }
}

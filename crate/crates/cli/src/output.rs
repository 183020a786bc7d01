//! Report assembly and emission.
//!
//! Every command builds a [`Report`]: a JSON object, optionally a table for
//! CSV output, and a status that decides the exit code. Floating-point
//! numbers are rounded to 15 significant digits before printing, so reruns
//! with the same seed produce identical bytes.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A statistical check had too few samples to decide.
    Inconclusive,
    /// The command ran but a check it performs did not hold.
    Failed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Inconclusive => 2,
        }
    }

    /// The worse of two statuses.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Table {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub struct Report {
    pub body: Map<String, Value>,
    pub table: Option<Table>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut body = Map::new();
        body.insert("command".into(), Value::from(command));
        Report { body, table: None, status: Status::Ok }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.body.insert(key.into(), v);
        self
    }

    /// Copies the fields of a serializable struct into the body.
    pub fn merge(&mut self, value: impl Serialize) -> &mut Self {
        match serde_json::to_value(value).expect("report values serialize") {
            Value::Object(map) => self.body.extend(map),
            other => panic!("merge expects an object, got {other}"),
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&round_sig(x)).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = Value::from(round_sig(x));
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Renders the report. `timestamp` adds a `generated_at` field (seconds since
/// the Unix epoch) to JSON output.
pub fn render(report: &Report, format: Format, timestamp: bool) -> Result<String, String> {
    match format {
        Format::Json => {
            let mut body = Value::Object(report.body.clone());
            round_numbers(&mut body);
            if timestamp {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                body.as_object_mut().expect("object").insert("generated_at".into(), Value::from(secs));
            }
            let mut text = serde_json::to_string_pretty(&body).map_err(|e| e.to_string())?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let table = report.table.as_ref().ok_or("this command produces no table; CSV is only available for tables")?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.headers).map_err(|e| e.to_string())?;
            for row in &table.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_fifteen_digits() {
        assert_eq!(round_sig(2.5f64.ln()).to_string(), "0.916290731874155");
        assert_eq!(round_sig(0.8), 0.8);
        assert_eq!(round_sig(1.0 / 3.0).to_string(), "0.333333333333333");
        assert_eq!(round_sig(-123456.78901234567).to_string(), "-123456.789012346");
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn json_numbers_are_rounded_recursively() {
        let mut r = Report::new("t");
        r.set("x", 1.0 / 3.0).set("xs", vec![2.0 / 3.0]).set("k", 7u64);
        let text = render(&r, Format::Json, false).unwrap();
        assert!(text.contains("0.333333333333333,") || text.contains("0.333333333333333\n"));
        assert!(text.contains("0.666666666666667"));
        assert!(text.contains("\"k\": 7"));
        assert!(!text.contains("generated_at"));
        assert!(render(&r, Format::Json, true).unwrap().contains("generated_at"));
    }

    #[test]
    fn csv_needs_a_table() {
        let mut r = Report::new("t");
        assert!(render(&r, Format::Csv, false).is_err());
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x, y".into()]);
        r.table = Some(t);
        assert_eq!(render(&r, Format::Csv, false).unwrap(), "a,b\n1,\"x, y\"\n");
    }

    #[test]
    fn status_combination() {
        assert_eq!(Status::Ok.and(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.and(Status::Failed), Status::Failed);
        assert_eq!(Status::Ok.and(Status::Ok).exit_code(), 0);
    }
}

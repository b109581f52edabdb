//! Rendering of command results as json, csv or text.

use clap::ValueEnum;
use geocycle::Error;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub mod code {
    pub const PASS: i32 = 0;
    pub const VERIFY_FAILED: i32 = 2;
    pub const INVALID: i32 = 3;
    pub const PRECISION: i32 = 4;
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InsufficientPrecision(_) | Error::Quadrature(_) | Error::SolverFailed(_) | Error::Overflow(_) => code::PRECISION,
        _ => code::INVALID,
    }
}

/// Row table for csv and text output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Output {
    pub json: Value,
    /// Reports are pretty-printed, plain objects compact.
    pub report: bool,
    pub table: Option<Table>,
    pub passed: bool,
}

impl Output {
    pub fn object<T: Serialize>(v: &T) -> Self {
        Output { json: serde_json::to_value(v).expect("serializable"), report: false, table: None, passed: true }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn render(&self, fmt: Format) -> String {
        match fmt {
            Format::Json => {
                let mut s = if self.report {
                    serde_json::to_string_pretty(&self.json)
                } else {
                    serde_json::to_string(&self.json)
                }
                .expect("json");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(vec![]);
                match &self.table {
                    Some(t) => {
                        w.write_record(&t.header).expect("csv");
                        for r in &t.rows {
                            w.write_record(r).expect("csv");
                        }
                    }
                    None => {
                        w.write_record(["key", "value"]).expect("csv");
                        for (k, v) in flat(&self.json) {
                            w.write_record([k, v]).expect("csv");
                        }
                    }
                }
                String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
            }
            Format::Text => {
                let mut out = String::new();
                if let Some(t) = &self.table {
                    out += &aligned(t);
                    if let Value::Object(m) = &self.json {
                        for (k, v) in m.iter().filter(|(k, _)| !matches!(k.as_str(), "rows" | "config" | "cells" | "components")) {
                            out += &format!("{k}: {}\n", scalar(v));
                        }
                    }
                } else {
                    for (k, v) in flat(&self.json) {
                        out += &format!("{k}: {v}\n");
                    }
                }
                out
            }
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Top-level entries as `(key, value)` text.
fn flat(v: &Value) -> Vec<(String, String)> {
    match v {
        Value::Object(m) => m.iter().map(|(k, v)| (k.clone(), scalar(v))).collect(),
        Value::Array(a) => a.iter().enumerate().map(|(i, v)| (i.to_string(), scalar(v))).collect(),
        other => vec![("value".into(), scalar(other))],
    }
}

fn aligned(t: &Table) -> String {
    let mut w: Vec<usize> = t.header.iter().map(|h| h.len()).collect();
    for r in &t.rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let s: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<width$}", width = w[i])).collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(t.header.clone());
    for r in &t.rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn formats() {
        let o = Output::object(&json!([[1, 0, 5], [2, 2, 3]]));
        assert_eq!(o.render(Format::Json), "[[1,0,5],[2,2,3]]\n");
        assert_eq!(o.render(Format::Csv), "key,value\n0,\"[1,0,5]\"\n1,\"[2,2,3]\"\n");
        let t = Table { header: vec!["a", "bb"], rows: vec![vec!["10".into(), "x".into()]] };
        let o = Output::object(&json!({"pass": true, "rows": []})).with_table(t);
        assert_eq!(o.render(Format::Text), "a   bb\n10  x\npass: true\n");
        assert_eq!(o.render(Format::Csv), "a,bb\n10,x\n");
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::SquareDiscriminant(4)), code::INVALID);
        assert_eq!(exit_code(&Error::InsufficientPrecision("x".into())), code::PRECISION);
        assert_eq!(exit_code(&Error::PoleOnCycle("0".into())), code::INVALID);
    }
}

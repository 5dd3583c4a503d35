//! JSON, table and DOT emission.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Number, Value};

use crate::abelian::QuotientElement;

pub const SCHEMA_VERSION: u64 = 1;

/// One command's output in every format it supports.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub table: String,
    pub dot: Option<String>,
    /// Process exit status once the report is printed.
    pub status: i32,
}

impl Report {
    pub fn new(command: &str, datum: &str, fields: Map<String, Value>, table: String) -> Self {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(command));
        obj.insert("datum".into(), json!(datum));
        obj.extend(fields);
        Self {
            json: Value::Object(obj),
            table,
            dot: None,
            status: 0,
        }
    }
}

pub fn int(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integers are JSON numbers"))
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(rows.iter().map(|r| ints(r)).collect())
}

/// Integers stay numbers; proper fractions become `"p/q"` strings.
pub fn rational(x: &BigRational) -> Value {
    if x.is_integer() {
        int(&x.to_integer())
    } else {
        json!(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn class(c: &QuotientElement) -> Value {
    json!(class_label(c))
}

/// `a,b|t`, with `0` for the zero class of the trivial group.
pub fn class_label(c: &QuotientElement) -> String {
    let s = c.to_string();
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

pub fn vector_label(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
    out
}

pub fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

//! Deterministic CSV and JSON tables with a metadata header.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Significant digits of every emitted float.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub const TOOL_NAME: &str = "semcom";

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    UInt(u64),
    Bool(bool),
    Str(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::UInt(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Str(s) => Some(s),
            _ => None,
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) if v.is_finite() => {
                let text = format_float(*v);
                serde_json::from_str(&text).unwrap_or(Value::String(text))
            }
            Cell::Float(v) => Value::String(format_float(*v)),
            Cell::Int(v) => Value::from(*v),
            Cell::UInt(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::UInt(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::UInt(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Empty strings become [`Cell::Empty`], which is how both formats read them back.
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::from(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        if v.is_empty() {
            Cell::Empty
        } else {
            Cell::Str(v)
        }
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    /// Ordered `key: value` pairs written before the data.
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; panics on a width mismatch, which is a programming error.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell at `(row, column name)`.
    pub fn get(&self, row: usize, name: &str) -> Option<&Cell> {
        self.column(name).and_then(|c| self.rows.get(row).map(|r| &r[c]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!("unknown output format `{other}`"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `%g`-style rendering with [`SIGNIFICANT_DIGITS`] digits; zero of either sign is `0`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Hex SHA-256 of a text.
pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Standard header: tool, version, command, seed and config digest.
pub fn standard_metadata(command: &str, seed: Option<u64>, config_toml: &str) -> Vec<(String, String)> {
    vec![
        ("tool".into(), TOOL_NAME.into()),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), command.into()),
        ("seed".into(), seed.map_or_else(|| "none".into(), |s| s.to_string())),
        ("config_sha256".into(), sha256_hex(config_toml)),
    ]
}

/// Renders a table. Empty tables still carry their metadata and header.
pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => render_csv(table),
        Format::Json => render_json(table),
    }
}

fn render_csv(table: &Table) -> String {
    let mut out = String::new();
    for (k, v) in &table.metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::text)).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    out.push_str(&String::from_utf8(bytes).expect("utf-8 cells"));
    out
}

fn render_json(table: &Table) -> String {
    let metadata: Map<String, Value> =
        table.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Object(table.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
        .collect();
    let mut doc = Map::new();
    doc.insert("metadata".into(), Value::Object(metadata));
    doc.insert("columns".into(), Value::from(table.columns.clone()));
    doc.insert("rows".into(), Value::Array(rows));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    s.push('\n');
    s
}

/// Writes a rendered table to `path`, or to stdout when `path` is `None`.
pub fn emit(table: &Table, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(table, format);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn parse_text_cell(s: &str) -> Cell {
    if s.is_empty() {
        return Cell::Empty;
    }
    match s {
        "true" => return Cell::Bool(true),
        "false" => return Cell::Bool(false),
        _ => {}
    }
    if let Ok(v) = s.parse::<u64>() {
        return Cell::UInt(v);
    }
    if let Ok(v) = s.parse::<i64>() {
        return Cell::Int(v);
    }
    match s.parse::<f64>() {
        Ok(v) if !s.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') => Cell::Float(v),
        _ => Cell::Str(s.to_string()),
    }
}

fn parse_json_cell(v: &Value) -> Cell {
    match v {
        Value::Null => Cell::Empty,
        Value::Bool(b) => Cell::Bool(*b),
        Value::Number(n) => n
            .as_u64()
            .map(Cell::UInt)
            .or_else(|| n.as_i64().map(Cell::Int))
            .unwrap_or_else(|| Cell::Float(n.as_f64().unwrap_or(f64::NAN))),
        Value::String(s) if s.is_empty() => Cell::Empty,
        Value::String(s) => Cell::Str(s.clone()),
        other => Cell::Str(other.to_string()),
    }
}

/// Reads back a rendered table. Cell types are inferred, so integers written
/// as floats come back as integers; compare through [`Cell::as_f64`]. Empty
/// strings read back as [`Cell::Empty`] in both formats.
pub fn parse_rendered(text: &str, format: Format) -> Result<Table> {
    let bad = |m: String| Error::InvalidArgument(format!("malformed {} table: {m}", format.as_str()));
    match format {
        Format::Csv => {
            let mut metadata = Vec::new();
            let mut body = String::new();
            for line in text.lines() {
                match line.strip_prefix("# ") {
                    Some(meta) if body.is_empty() => {
                        let (k, v) = meta.split_once(": ").ok_or_else(|| bad(format!("metadata line `{line}`")))?;
                        metadata.push((k.to_string(), v.to_string()));
                    }
                    _ => {
                        body.push_str(line);
                        body.push('\n');
                    }
                }
            }
            let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
            let columns = r.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
            let rows = r
                .records()
                .map(|rec| rec.map(|rec| rec.iter().map(parse_text_cell).collect()).map_err(|e| bad(e.to_string())))
                .collect::<Result<_>>()?;
            Ok(Table { metadata, columns, rows })
        }
        Format::Json => {
            let doc: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
            let metadata = doc["metadata"]
                .as_object()
                .ok_or_else(|| bad("missing metadata".into()))?
                .iter()
                .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
                .collect();
            let columns: Vec<String> = doc["columns"]
                .as_array()
                .ok_or_else(|| bad("missing columns".into()))?
                .iter()
                .map(|c| c.as_str().unwrap_or_default().to_string())
                .collect();
            let rows = doc["rows"]
                .as_array()
                .ok_or_else(|| bad("missing rows".into()))?
                .iter()
                .map(|r| columns.iter().map(|c| parse_json_cell(&r[c])).collect())
                .collect();
            Ok(Table { metadata, columns, rows })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(-2.5), "-2.5");
        assert_eq!(format_float(1.5e-7), "1.5e-07");
        assert_eq!(format_float(1.5e-5), "1.5e-05");
        assert_eq!(format_float(2.5e-4), "0.00025");
        assert_eq!(format_float(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_float(0.531004406410719), "0.531004406411");
        assert_eq!(format_float(99999.9999999999), "100000");
    }

    fn sample() -> Table {
        let mut t = Table::new(&["name", "x", "n", "ok", "note"]);
        t.metadata = standard_metadata("test", Some(4), "a = 1\n");
        t.push(vec!["a,b".into(), 0.1.into(), 3usize.into(), true.into(), Cell::Empty]);
        t.push(vec!["c".into(), (-1.0 / 7.0).into(), 0usize.into(), false.into(), "x y;z".into()]);
        t
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["a", "b"]);
        assert_eq!(render(&t, Format::Csv), "a,b\n");
        let back = parse_rendered(&render(&t, Format::Json), Format::Json).unwrap();
        assert_eq!(back.columns, vec!["a", "b"]);
        assert!(back.rows.is_empty());
    }

    #[test]
    fn formats_agree_after_parsing() {
        let t = sample();
        let csv = parse_rendered(&render(&t, Format::Csv), Format::Csv).unwrap();
        let json = parse_rendered(&render(&t, Format::Json), Format::Json).unwrap();
        assert_eq!(csv, json);
        assert_eq!(csv.metadata, t.metadata);
        assert_eq!(csv.get(1, "x").unwrap().as_f64(), Some(-0.142857142857));
        assert_eq!(csv.get(0, "name").unwrap().as_str(), Some("a,b"));
    }

    #[test]
    fn emit_reports_path_on_failure() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("missing").join("out.csv");
        let err = emit(&sample(), Format::Csv, Some(&bad)).unwrap_err();
        assert!(err.to_string().contains("missing"));
        let good = dir.path().join("out.json");
        emit(&sample(), Format::Json, Some(&good)).unwrap();
        assert!(std::fs::read_to_string(good).unwrap().contains("\"config_sha256\""));
    }
}

//! Tabular reports written as CSV (6 significant digits) and JSON (full precision).

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use super::config::{Format, RunConfig};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// `None` prints as `NA`.
    Num(Option<f64>),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(Some(v))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Round to `sig` significant digits; positional notation for moderate
/// magnitudes, exponent notation otherwise. Never locale dependent.
pub fn format_sig(v: f64, sig: usize) -> String {
    if v.is_nan() {
        return "NA".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", sig - 1, v);
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        // Lay the rounded digits out positionally.
        let neg = mant.starts_with('-');
        let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
        let body = if exp >= 0 {
            let e = exp as usize + 1;
            if e >= digits.len() {
                format!("{digits}{}", "0".repeat(e - digits.len()))
            } else {
                trim_zeros(format!("{}.{}", &digits[..e], &digits[e..]))
            }
        } else {
            trim_zeros(format!("0.{}{digits}", "0".repeat((-exp - 1) as usize)))
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn json_num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        Value::Null
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra JSON-only sections.
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<String>) -> Self {
        Report { command, columns, rows: Vec::new(), extra: Map::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn header_line(&self, cfg: &RunConfig) -> String {
        format!("# ltrc {} config={}", self.command, cfg.to_json())
    }

    pub fn to_csv(&self, cfg: &RunConfig) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(&self.columns)?;
        for row in &self.rows {
            wtr.write_record(row.iter().map(|c| match c {
                Cell::Num(Some(v)) => format_sig(*v, 6),
                Cell::Num(None) => "NA".into(),
                Cell::Int(i) => i.to_string(),
                Cell::Text(t) => t.clone(),
                Cell::Bool(b) => b.to_string(),
            }))?;
        }
        let body = String::from_utf8(wtr.into_inner().map_err(|e| e.into_error())?).expect("utf8 csv");
        Ok(format!("{}\n{body}", self.header_line(cfg)))
    }

    pub fn to_json(&self, cfg: &RunConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(Some(v)) => json_num(*v),
                            Cell::Num(None) => Value::Null,
                            Cell::Int(i) => json!(i),
                            Cell::Text(t) => json!(t),
                            Cell::Bool(b) => json!(b),
                        };
                        (k.clone(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), json!(self.command));
        top.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
        top.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.extra {
            top.insert(k.clone(), v.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
        s.push('\n');
        s
    }

    /// Write `<stem>.csv` and/or `<stem>.json` under `dir`.
    pub fn write(&self, dir: &Path, stem: &str, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if cfg.wants(Format::Csv) {
            let p = dir.join(format!("{stem}.csv"));
            std::fs::write(&p, self.to_csv(cfg)?)?;
            written.push(p);
        }
        if cfg.wants(Format::Json) {
            let p = dir.join(format!("{stem}.json"));
            std::fs::write(&p, self.to_json(cfg))?;
            written.push(p);
        }
        Ok(written)
    }
}

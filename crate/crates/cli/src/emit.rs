//! CSV and JSON-lines tables. Floats carry 9 significant digits, big integers
//! are decimal strings, and the JSON-lines mirror holds one object per row.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Number, Value as Json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Big(String),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        i64::try_from(v).map_or_else(|_| Value::Big(v.to_string()), Value::Int)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::from(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

/// Nine significant digits, trailing zeros trimmed; scientific notation
/// outside `[1e−5, 1e15)`.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        return format!("{x:.8e}");
    }
    let prec = (8 - mag).max(0) as usize;
    let s = format!("{x:.prec$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Big(v) => v.clone(),
            Value::Float(v) => fmt_float(*v),
            Value::Bool(v) => v.to_string(),
            Value::Text(v) if v.contains([',', '"', '\n']) => format!("\"{}\"", v.replace('"', "\"\"")),
            Value::Text(v) => v.clone(),
            Value::Null => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(v) => Json::from(*v),
            Value::Big(v) | Value::Text(v) => Json::from(v.clone()),
            Value::Float(v) => fmt_float(*v)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Json::Null, Json::Number),
            Value::Bool(v) => Json::from(*v),
            Value::Null => Json::Null,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write<W: Write>(&self, w: &mut W, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(w, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Value::csv).collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
            }
            Format::Jsonl => {
                for row in &self.rows {
                    let obj: Map<String, Json> =
                        self.columns.iter().cloned().zip(row.iter().map(Value::json)).collect();
                    writeln!(w, "{}", Json::Object(obj))?;
                }
            }
        }
        Ok(())
    }

    pub fn to_string(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, format).expect("writing to memory");
        String::from_utf8(buf).expect("tables are UTF-8")
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit_table(table: &Table, format: Format, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            table.write(&mut w, format)?;
            w.flush()
        }
        None => table.write(&mut io::stdout().lock(), format),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_digits() {
        assert_eq!(fmt_float(std::f64::consts::LN_2), "0.693147181");
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(1234.5), "1234.5");
        assert_eq!(fmt_float(-2.0), "-2");
        assert_eq!(fmt_float(1e-7), "1.00000000e-7");
    }

    #[test]
    fn header_only_and_one_row() {
        let mut t = Table::new(&["n", "N_k", "rate"]);
        assert_eq!(t.to_string(Format::Csv), "n,N_k,rate\n");
        assert_eq!(t.to_string(Format::Jsonl), "");
        t.push(vec![Value::from(3i64), Value::Big("340282366920938463463374607431768211456".into()), Value::from(0.25)]);
        assert_eq!(t.to_string(Format::Csv).lines().count(), 2);
        let line = t.to_string(Format::Jsonl);
        assert_eq!(line, "{\"n\":3,\"N_k\":\"340282366920938463463374607431768211456\",\"rate\":0.25}\n");
    }

    #[test]
    fn text_is_quoted() {
        let mut t = Table::new(&["label"]);
        t.push(vec![Value::from("a,b")]);
        assert_eq!(t.to_string(Format::Csv), "label\n\"a,b\"\n");
    }
}

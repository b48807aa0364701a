//! Report rendering as aligned text, CSV or canonical JSON.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Num(f64),
    Str(String),
    Bool(bool),
    Diverging,
    List(Vec<f64>),
    Null,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<Vec<f64>> for Value {
    fn from(v: Vec<f64>) -> Self {
        Value::List(v)
    }
}

#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Section {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn fixed(v: f64, precision: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    let s = format!("{v:.precision$}");
    // no "-0.000000"
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn cell_text(v: &Value, precision: usize, list_sep: &str) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Num(x) => fixed(*x, precision),
        Value::Str(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Diverging => "diverging".into(),
        Value::List(xs) => {
            let inner: Vec<String> = xs.iter().map(|x| fixed(*x, precision)).collect();
            format!("({})", inner.join(list_sep))
        }
        Value::Null => "-".into(),
    }
}

fn rounded(x: f64, precision: usize) -> Json {
    if !x.is_finite() {
        return Json::Null;
    }
    let scale = 10f64.powi(precision.min(15) as i32);
    let mut r = (x * scale).round() / scale;
    if r == 0.0 {
        r = 0.0;
    }
    Number::from_f64(r).map_or(Json::Null, Json::Number)
}

fn cell_json(v: &Value, precision: usize) -> Json {
    match v {
        Value::Int(i) => Json::from(*i),
        Value::Num(x) => rounded(*x, precision),
        Value::Str(s) => Json::from(s.as_str()),
        Value::Bool(b) => Json::from(*b),
        Value::Diverging => Json::from("diverging"),
        Value::List(xs) => Json::Array(xs.iter().map(|x| rounded(*x, precision)).collect()),
        Value::Null => Json::Null,
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(sections: &[Section], format: Format, precision: usize) -> String {
    match format {
        Format::Text => render_text(sections, precision),
        Format::Csv => render_csv(sections, precision),
        Format::Json => render_json(sections, precision),
    }
}

fn render_text(sections: &[Section], precision: usize) -> String {
    let mut out = String::new();
    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "# {}", s.name);
        let cells: Vec<Vec<String>> = s
            .rows
            .iter()
            .map(|r| r.iter().map(|v| cell_text(v, precision, ", ")).collect())
            .collect();
        let mut widths: Vec<usize> = s.columns.iter().map(|c| c.len()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |items: &[String]| {
            items
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let _ = writeln!(out, "{}", line(&s.columns));
        for row in &cells {
            let _ = writeln!(out, "{}", line(row));
        }
    }
    out
}

fn render_csv(sections: &[Section], precision: usize) -> String {
    let mut out = String::new();
    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let mut header = vec!["section".to_string()];
        header.extend(s.columns.iter().cloned());
        let _ = writeln!(out, "{}", header.join(","));
        for row in &s.rows {
            let mut fields = vec![csv_field(&s.name)];
            fields.extend(row.iter().map(|v| csv_field(&cell_text(v, precision, ";"))));
            let _ = writeln!(out, "{}", fields.join(","));
        }
    }
    out
}

fn render_json(sections: &[Section], precision: usize) -> String {
    let mut root = Map::new();
    for s in sections {
        let rows: Vec<Json> = s
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Json> = s
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.clone(), cell_json(v, precision)))
                    .collect();
                Json::Object(obj)
            })
            .collect();
        root.insert(s.name.clone(), Json::Array(rows));
    }
    let mut text = serde_json::to_string_pretty(&Json::Object(root)).expect("serializable");
    text.push('\n');
    text
}

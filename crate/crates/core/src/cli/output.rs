use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_owned())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<Option<f64>> for Field {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Field::Empty, Field::Num)
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string().to_lowercase()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Field>>,
}

impl CsvTable {
    pub fn new(header: &'static [&'static str]) -> Self {
        CsvTable {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, field) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match field {
                    Field::Num(x) => out.push_str(&number(*x)),
                    Field::Text(s) => out.push_str(s),
                    Field::Empty => {}
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn versions() -> Value {
    json!({
        "quinticate": env!("CARGO_PKG_VERSION"),
        "schema": 1,
    })
}

pub fn render_json<C: Serialize>(config: &C, results: &Value) -> String {
    let doc = json!({
        "config": config,
        "results": results,
        "versions": versions(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report values are serialisable");
    let _ = writeln!(text);
    text
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}

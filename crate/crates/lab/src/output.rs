//! CSV tables, run outcomes and the run manifest.

use std::fmt::Write as _;

/// Floats are printed with 17 significant digits, which round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(u64),
    B(bool),
    S(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::U(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::U(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::U(x) => x.to_string(),
            Cell::B(x) => x.to_string(),
            Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { columns: header.len(), text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns, "row width does not match the header");
        let r: Vec<String> = cells.iter().map(Cell::render).collect();
        writeln!(self.text, "{}", r.join(",")).unwrap();
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// One failed inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: lhs {} > rhs {}", self.name, fmt_f64(self.lhs), fmt_f64(self.rhs))
    }
}

/// Everything a subcommand produced: output files (name, contents), summary values for the
/// manifest and the violated bounds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub summary: Vec<(String, String)>,
    pub violations: Vec<Violation>,
}

impl Outcome {
    pub fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    pub fn csv(&mut self, name: &str, csv: Csv) {
        self.file(name, csv.into_string());
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn note_f64(&mut self, key: &str, value: f64) {
        self.note(key, fmt_f64(value));
    }

    /// Records a violation unless `lhs ≤ rhs`.
    pub fn check(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) -> bool {
        let ok = lhs <= rhs;
        if !ok {
            self.violations.push(Violation { name: name.into(), lhs, rhs });
        }
        ok
    }

    /// Records a violation of a boolean property as `1 > 0`.
    pub fn require(&mut self, name: impl Into<String>, ok: bool) -> bool {
        if !ok {
            self.violations.push(Violation { name: name.into(), lhs: 1.0, rhs: 0.0 });
        }
        ok
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

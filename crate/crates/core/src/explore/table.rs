use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::identities::IdentityReport;
use crate::numerics::{ApproxComplex, ExactRational};
use crate::sums::SumValue;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Exact(ExactRational),
    Float(f64),
    Complex(ApproxComplex),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn from_value(v: &SumValue) -> Cell {
        match v {
            SumValue::Exact(x) => Cell::Exact(x.clone()),
            SumValue::Approx(z) => Cell::Complex(*z),
            SumValue::Polynomial(p) => Cell::Text(p.to_string()),
        }
    }

    pub fn opt_float(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Float)
    }

    pub fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Exact(x) => x.to_string(),
            Cell::Float(x) => float17(*x),
            Cell::Complex(z) => complex17(*z),
            Cell::Text(s) => csv_quote(s),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Exact(x) => json!(x.to_string()),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Complex(z) => json!({ "re": z.re, "im": z.im }),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.6e}"),
            Cell::Complex(z) => format!("{:.6e}{:+.6e}i", z.re, z.im),
            Cell::Text(s) => s.clone(),
            Cell::Empty => "-".into(),
            other => other.csv(),
        }
    }
}

/// Floats with 17 significant digits.
pub(crate) fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn complex17(z: ApproxComplex) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub cells: Vec<Cell>,
}

/// Rows keyed by their leading parameter columns, in ascending order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<ScanRow>,
    /// Rows that failed a built-in check (oracle mismatch, regression bound).
    pub failures: Vec<String>,
}

impl ScanTable {
    pub fn new(columns: Vec<&'static str>) -> Self {
        ScanTable { columns, rows: Vec::new(), failures: Vec::new() }
    }

    pub fn push(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(ScanRow { cells });
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Cells of one column, top to bottom.
    pub fn column_cells(&self, name: &str) -> Vec<&Cell> {
        let idx = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| &r.cells[idx]).collect()
    }

    /// Header plus rows as CSV; the region covered by the manifest digest.
    pub fn csv_body(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.cells.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn digest(&self) -> String {
        sha256_hex(self.csv_body().as_bytes())
    }

    fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (name, cell) in self.columns.iter().zip(&row.cells) {
                        obj.insert((*name).to_string(), cell.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    fn text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.cells.iter().map(Cell::text).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| cells.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: Vec<&str>| {
            let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, self.columns.clone());
        for row in &cells {
            line(&mut out, row.iter().map(String::as_str).collect());
        }
        out
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// Run metadata embedded at the top of every output file. The wall time is
/// outside the digest.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows_sha256: Option<String>,
    pub wall_time_ms: f64,
}

impl Manifest {
    pub fn new(command: impl Into<String>) -> Self {
        Manifest {
            tool: "combwalks",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            params: Map::new(),
            seed: None,
            notes: Vec::new(),
            rows_sha256: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    fn json_line(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }
}

/// Renders a scan with its manifest. The manifest's `rows_sha256` is filled
/// from the table.
pub fn render_table(table: &ScanTable, manifest: &Manifest, format: Format) -> String {
    let mut manifest = manifest.clone();
    manifest.rows_sha256 = Some(table.digest());
    match format {
        Format::Csv => format!("# manifest: {}\n{}", manifest.json_line(), table.csv_body()),
        Format::Json => {
            let doc = json!({ "manifest": manifest, "rows": table.json_rows() });
            let mut s = serde_json::to_string_pretty(&doc).expect("json");
            s.push('\n');
            s
        }
        Format::Text => format!("# manifest: {}\n{}", manifest.json_line(), table.text()),
    }
}

/// Renders identity reports.
pub fn render_reports(reports: &[IdentityReport], manifest: &Manifest, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = json!({ "manifest": manifest, "reports": reports });
            let mut s = serde_json::to_string_pretty(&doc).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = format!(
                "# manifest: {}\nid,params,verdict,constant,hypothesis_holds,lhs,rhs,ms\n",
                manifest.json_line()
            );
            for r in reports {
                let constant = r.constant().map(ToString::to_string).unwrap_or_default();
                let hyp = r.hypothesis.as_ref().map(|h| h.holds.to_string()).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{:.3}",
                    r.id,
                    csv_quote(&r.param_string()),
                    r.verdict.label(),
                    constant,
                    hyp,
                    csv_quote(&r.lhs.to_string()),
                    csv_quote(&r.rhs.to_string()),
                    r.ms
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                let mut line = format!("{} {}: {}", r.id, r.param_string(), r.verdict.label());
                if let Some(c) = r.constant() {
                    let _ = write!(line, " (constant {c})");
                }
                if let Some(h) = &r.hypothesis {
                    let _ = write!(line, " [{} {}]", h.formula, if h.holds { "holds" } else { "fails" });
                }
                if r.verdict.is_mismatch() {
                    let _ = write!(line, " lhs={} rhs={}", r.lhs, r.rhs);
                }
                out.push_str(&line);
                out.push('\n');
            }
            let bad = reports.iter().filter(|r| r.verdict.is_mismatch()).count();
            let _ = writeln!(out, "{} checks, {} mismatches", reports.len(), bad);
            out
        }
    }
}

//! Tabular report model shared by the CLI and the sweep runner: CSV and JSON emitters.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::numerics::{Policy, Real};
use crate::verdict::Verdict;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default significant digits for enclosure endpoints.
pub const DEFAULT_DIGITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Plain,
    /// Emitted as a `name.lo`, `name.hi` pair.
    Interval,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Str(String),
    Int(i64),
    Uint(u64),
    Real(Real),
    Verdict(Verdict),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Str(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Str(s)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Cell {
        Cell::Uint(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Cell {
        Cell::Uint(v as u64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Cell {
        Cell::Int(v)
    }
}

impl From<Real> for Cell {
    fn from(v: Real) -> Cell {
        Cell::Real(v)
    }
}

impl From<&Real> for Cell {
    fn from(v: &Real) -> Cell {
        Cell::Real(v.clone())
    }
}

impl From<Verdict> for Cell {
    fn from(v: Verdict) -> Cell {
        Cell::Verdict(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Cell {
        v.map(Into::into).unwrap_or(Cell::Empty)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<(String, Kind)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(cols: &[(&str, Kind)]) -> Table {
        Table { columns: cols.iter().map(|(n, k)| (n.to_string(), *k)).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Table) {
        assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }

    /// Worst verdict cell in the table.
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.rows.iter().flatten().filter_map(|c| match c {
            Cell::Verdict(v) => Some(*v),
            _ => None,
        }))
    }

    fn header(&self) -> Vec<String> {
        let mut h = Vec::new();
        for (n, k) in &self.columns {
            match k {
                Kind::Plain => h.push(n.clone()),
                Kind::Interval => {
                    h.push(format!("{n}.lo"));
                    h.push(format!("{n}.hi"));
                }
            }
        }
        h
    }

    fn flat(cell: &Cell, kind: Kind, digits: usize) -> Vec<String> {
        match (cell, kind) {
            (Cell::Real(r), Kind::Interval) => {
                let (lo, hi) = r.to_decimal(digits);
                vec![lo, hi]
            }
            (Cell::Empty, Kind::Interval) => vec![String::new(), String::new()],
            (c, Kind::Interval) => vec![plain(c, digits), plain(c, digits)],
            (c, Kind::Plain) => vec![plain(c, digits)],
        }
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        w.write_record(self.header()).expect("in-memory write");
        for row in &self.rows {
            let mut rec = Vec::new();
            for (c, (_, k)) in row.iter().zip(&self.columns) {
                rec.extend(Table::flat(c, *k, digits));
            }
            w.write_record(rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn json_rows(&self, digits: usize) -> Vec<Map<String, Value>> {
        self.rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, (name, k)) in row.iter().zip(&self.columns) {
                    m.insert(name.clone(), json_cell(c, *k, digits));
                }
                m
            })
            .collect()
    }

    pub fn to_json(&self, meta: Meta, digits: usize) -> String {
        let doc = Document { meta, rows: self.json_rows(digits) };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format, meta: Meta, digits: usize) -> String {
        match format {
            Format::Csv => self.to_csv(digits),
            Format::Json => self.to_json(meta, digits),
        }
    }
}

fn plain(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Str(s) => s.clone(),
        Cell::Int(v) => v.to_string(),
        Cell::Uint(v) => v.to_string(),
        Cell::Real(r) => {
            let (lo, hi) = r.to_decimal(digits);
            format!("[{lo},{hi}]")
        }
        Cell::Verdict(v) => v.as_str().into(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell, kind: Kind, digits: usize) -> Value {
    match (c, kind) {
        (Cell::Real(r), _) => {
            let (lo, hi) = r.to_decimal(digits);
            let mut m = Map::new();
            m.insert("lo".into(), Value::String(lo));
            m.insert("hi".into(), Value::String(hi));
            Value::Object(m)
        }
        (Cell::Int(v), _) => Value::from(*v),
        (Cell::Uint(v), _) => Value::from(*v),
        (Cell::Empty, _) => Value::Null,
        (c, _) => Value::String(plain(c, digits)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (csv|json)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyMeta {
    pub initial_bits: u32,
    pub max_bits: u32,
    pub digits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub command: String,
    pub alpha: String,
    pub policy: PolicyMeta,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Meta {
    pub fn new(command: &str, alpha: &str, policy: &Policy, digits: usize, verdict: Verdict) -> Meta {
        Meta {
            version: VERSION.into(),
            command: command.into(),
            alpha: alpha.into(),
            policy: PolicyMeta { initial_bits: policy.initial_bits, max_bits: policy.max_bits, digits },
            verdict,
            notes: vec![],
        }
    }
}

/// The JSON document shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub meta: Meta,
    pub rows: Vec<Map<String, Value>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&[("r", Kind::Plain), ("x", Kind::Interval), ("verdict", Kind::Plain)]);
        t.push(vec![1u64.into(), Real::ratio(1, 3, 128).into(), Verdict::Pass.into()]);
        t.push(vec![2u64.into(), Cell::Empty, Verdict::Indeterminate.into()]);
        t
    }

    #[test]
    fn csv_shape() {
        let s = sample().to_csv(20);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("r,x.lo,x.hi,verdict"));
        let row: Vec<_> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 4);
        let back = Real::from_decimal(row[1], row[2], 128).unwrap();
        assert!(back.contains_rational(&rug::Rational::from((1, 3))));
        assert!(back.width() < 1e-19);
        assert_eq!(sample().verdict(), Verdict::Indeterminate);
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let meta = Meta::new("test", "golden", &Policy::default(), 20, t.verdict());
        let s = t.to_json(meta, 20);
        let doc: Document = serde_json::from_str(&s).unwrap();
        let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
        assert_eq!(s, again);
        assert_eq!(doc.rows[0]["x"]["lo"].as_str().unwrap().len() >= 20, true);
    }
}

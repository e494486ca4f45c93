//! Homogeneous record emission as CSV or JSON lines, with a `#` metadata line.

use nmkdv_core::asymptotics::SweepRecord;
use nmkdv_core::scattering::{reflection_coefficients, ScatteringSample};
use nmkdv_core::validation::ResidualStats;
use nmkdv_core::{Error, Result};
use num_complex::Complex64;
use serde_json::{Map, Value as Json};
use std::fmt::Write as _;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "jsonl" => Some(Format::Jsonl),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Real,
    Integer,
    /// written as `<name>_re`, `<name>_im`
    Complex,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Integer(i64),
    Complex(Complex64),
    Text(String),
    /// empty CSV field, JSON null
    Missing,
}

pub trait Record {
    fn schema() -> Vec<(&'static str, ColumnKind)>;
    fn cells(&self) -> Vec<Cell>;
}

/// Flattened column names in output order.
pub fn header<R: Record>() -> Vec<String> {
    let mut h = Vec::new();
    for (name, kind) in R::schema() {
        match kind {
            ColumnKind::Complex => {
                h.push(format!("{name}_re"));
                h.push(format!("{name}_im"));
            }
            _ => h.push(name.to_string()),
        }
    }
    h
}

fn flatten(schema: &[(&'static str, ColumnKind)], cells: Vec<Cell>) -> Result<Vec<Cell>> {
    if cells.len() != schema.len() {
        return Err(Error::ShapeMismatch(format!("record has {} cells, schema {}", cells.len(), schema.len())));
    }
    let mut out = Vec::with_capacity(cells.len() + 4);
    for ((name, kind), c) in schema.iter().zip(cells) {
        match (kind, c) {
            (ColumnKind::Complex, Cell::Complex(z)) => {
                out.push(Cell::Real(z.re));
                out.push(Cell::Real(z.im));
            }
            (ColumnKind::Complex, Cell::Missing) => {
                out.push(Cell::Missing);
                out.push(Cell::Missing);
            }
            (ColumnKind::Real, c @ (Cell::Real(_) | Cell::Missing))
            | (ColumnKind::Integer, c @ (Cell::Integer(_) | Cell::Missing))
            | (ColumnKind::Text, c @ (Cell::Text(_) | Cell::Missing)) => out.push(c),
            (k, c) => return Err(Error::ShapeMismatch(format!("column {name}: {c:?} does not match {k:?}"))),
        }
    }
    Ok(out)
}

fn csv_cell(c: &Cell, s: &mut String) {
    match c {
        Cell::Real(x) => {
            let _ = write!(s, "{x:?}");
        }
        Cell::Integer(n) => {
            let _ = write!(s, "{n}");
        }
        Cell::Text(t) => s.push_str(t),
        Cell::Missing => {}
        Cell::Complex(_) => unreachable!("flattened"),
    }
}

fn json_cell(c: &Cell) -> Json {
    match c {
        Cell::Real(x) => serde_json::Number::from_f64(*x).map(Json::Number).unwrap_or(Json::Null),
        Cell::Integer(n) => Json::from(*n),
        Cell::Text(t) => Json::String(t.clone()),
        Cell::Missing => Json::Null,
        Cell::Complex(_) => unreachable!("flattened"),
    }
}

/// Render records in a deterministic column order; `meta` becomes the first line.
pub fn render<R: Record>(records: &[R], format: Format, meta: &str) -> Result<String> {
    let schema = R::schema();
    let cols = header::<R>();
    let mut s = String::new();
    s.push_str(meta);
    s.push('\n');
    if format == Format::Csv {
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    for r in records {
        let cells = flatten(&schema, r.cells())?;
        match format {
            Format::Csv => {
                for (j, c) in cells.iter().enumerate() {
                    if j > 0 {
                        s.push(',');
                    }
                    csv_cell(c, &mut s);
                }
            }
            Format::Jsonl => {
                let obj: Map<String, Json> = cols.iter().cloned().zip(cells.iter().map(json_cell)).collect();
                s.push_str(&Json::Object(obj).to_string());
            }
        }
        s.push('\n');
    }
    Ok(s)
}

/// Write text to a path, or stdout for `-`.
pub fn emit(text: &str, path: &str) -> Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| Error::IoFailure(format!("{path}: {e}")))
    }
}

pub fn write_dataset<R: Record>(records: &[R], format: Format, path: &str, meta: &str) -> Result<()> {
    emit(&render(records, format, meta)?, path)
}

/// Spectral record: a scattering sample with its reflection coefficients.
pub struct SpectralRecord(pub ScatteringSample);

impl Record for SpectralRecord {
    fn schema() -> Vec<(&'static str, ColumnKind)> {
        use ColumnKind::*;
        vec![("k", Real), ("a1", Complex), ("a2", Complex), ("b", Complex), ("r1", Complex), ("r2", Complex)]
    }
    fn cells(&self) -> Vec<Cell> {
        let s = &self.0;
        let (r1, r2) = match reflection_coefficients(s) {
            Ok(r) => (Cell::Complex(r.r1), Cell::Complex(r.r2)),
            Err(_) => (Cell::Missing, Cell::Missing),
        };
        vec![Cell::Real(s.k), Cell::Complex(s.a1), Cell::Complex(s.a2), Cell::Complex(s.b), r1, r2]
    }
}

impl Record for SweepRecord {
    fn schema() -> Vec<(&'static str, ColumnKind)> {
        use ColumnKind::*;
        vec![
            ("x", Real),
            ("t", Real),
            ("xi", Real),
            ("sector", Text),
            ("u_leading", Real),
            ("u_subleading", Real),
            ("u_total", Real),
            ("error_order_exponent", Real),
        ]
    }
    fn cells(&self) -> Vec<Cell> {
        let o = |v: Option<f64>| v.map(Cell::Real).unwrap_or(Cell::Missing);
        vec![
            Cell::Real(self.x),
            Cell::Real(self.t),
            Cell::Real(self.xi),
            Cell::Text(self.sector.to_string()),
            o(self.u_leading),
            o(self.u_subleading),
            o(self.u_total),
            o(self.error_order_exponent),
        ]
    }
}

impl Record for ResidualStats {
    fn schema() -> Vec<(&'static str, ColumnKind)> {
        use ColumnKind::*;
        vec![("max_abs", Real), ("rms", Real), ("argmax_x", Real), ("argmax_t", Real), ("count", Integer)]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![Cell::Real(self.max_abs), Cell::Real(self.rms), Cell::Real(self.argmax_x), Cell::Real(self.argmax_t), Cell::Integer(self.count as i64)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nmkdv_core::asymptotics::SectorTag;
    use nmkdv_core::scattering::{pure_step_sample, spectral_csv_row, SPECTRAL_CSV_HEADER};

    #[test]
    fn empty_is_header_only() {
        let s = render::<SpectralRecord>(&[], Format::Csv, "# m").unwrap();
        assert_eq!(s, format!("# m\n{SPECTRAL_CSV_HEADER}\n"));
        assert_eq!(render::<SpectralRecord>(&[], Format::Jsonl, "# m").unwrap(), "# m\n");
    }

    #[test]
    fn spectral_schema_matches_scattering_rows() {
        let recs: Vec<SpectralRecord> = [-2.0, -0.3, 0.7, 5.0].iter().map(|&k| SpectralRecord(pure_step_sample(1.5, 1.0, k))).collect();
        let s = render(&recs, Format::Csv, "# m").unwrap();
        let mut lines = s.lines().skip(2);
        for r in &recs {
            assert_eq!(lines.next().unwrap(), spectral_csv_row(&r.0).unwrap());
        }
    }

    #[test]
    fn jsonl_columns_and_missing() {
        let r = SweepRecord {
            x: 4.0,
            t: 1.0,
            xi: 1.0 / 3.0,
            sector: SectorTag::Boundary,
            u_leading: None,
            u_subleading: None,
            u_total: None,
            error_order_exponent: None,
        };
        let s = render(&[r.clone()], Format::Jsonl, "# m").unwrap();
        let v: Json = serde_json::from_str(s.lines().nth(1).unwrap()).unwrap();
        assert_eq!(v["sector"], "Boundary");
        assert!(v["u_total"].is_null());
        assert_eq!(v["xi"].as_f64(), Some(1.0 / 3.0));
        let c = render(&[r], Format::Csv, "# m").unwrap();
        assert_eq!(c.lines().nth(2).unwrap(), "4.0,1.0,0.3333333333333333,Boundary,,,,");
        assert_eq!(c.lines().nth(1).unwrap(), nmkdv_core::asymptotics::ASYM_CSV_HEADER);
    }

    #[test]
    fn complex_columns_split() {
        let r = SpectralRecord(pure_step_sample(2.0, 1.0, 1.0));
        let s = render(&[r], Format::Jsonl, "# m").unwrap();
        let v: Json = serde_json::from_str(s.lines().nth(1).unwrap()).unwrap();
        assert_eq!(v["a1_re"].as_f64(), Some(2.0));
        assert_eq!(v["a1_im"].as_f64(), Some(0.0));
        assert_eq!(v.as_object().unwrap().len(), 11);
    }
}

//! Reading and writing curve files and run reports.
//!
//! CSV files hold one vertex per row. A header names the columns; a column
//! called `name` groups rows into curves, every other column is a
//! coordinate. Lines starting with `#` are comments. JSON files follow
//! `{"curves": [{"name": ..., "dim": ..., "vertices": [[...], ...]}]}`.
//! Numbers are written in shortest round-trip form, so writing and reading
//! back reproduces every coordinate bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Curve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedCurve {
    pub name: String,
    pub curve: Curve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveFile {
    pub format: Format,
    pub dim: usize,
    pub curves: Vec<NamedCurve>,
}

impl CurveFile {
    pub fn new(format: Format, curves: Vec<NamedCurve>) -> Result<Self> {
        let dim = curves.first().map(|c| c.curve.dim()).ok_or_else(|| Error::Parse("no curves".into()))?;
        if let Some(bad) = curves.iter().find(|c| c.curve.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, bad.curve.dim()));
        }
        Ok(CurveFile { format, dim, curves })
    }

    pub fn get(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.name == name).map(|c| &c.curve)
    }
}

/// Name given to the single curve of a CSV file without a `name` column.
pub const DEFAULT_CURVE_NAME: &str = "curve";

pub fn parse_csv(text: &str) -> Result<CurveFile> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .clone();
    let name_col = headers.iter().position(|h| h.eq_ignore_ascii_case("name"));
    let coord_cols: Vec<usize> = (0..headers.len()).filter(|&k| Some(k) != name_col).collect();
    let dim = coord_cols.len();
    if dim == 0 {
        return Err(Error::Parse("CSV header has no coordinate columns".into()));
    }
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != headers.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                line + 1,
                record.len(),
                headers.len()
            )));
        }
        let name = name_col.map_or(DEFAULT_CURVE_NAME, |k| &record[k]);
        let idx = match groups.iter().position(|(n, _)| n == name) {
            Some(i) => i,
            None => {
                groups.push((name.to_string(), Vec::new()));
                groups.len() - 1
            }
        };
        for &k in &coord_cols {
            let x: f64 = record[k].parse().map_err(|_| {
                Error::Parse(format!("row {}: '{}' is not a number", line + 1, &record[k]))
            })?;
            groups[idx].1.push(x);
        }
    }
    let curves = groups
        .into_iter()
        .map(|(name, coords)| Ok(NamedCurve { name, curve: Curve::from_flat(dim, coords)? }))
        .collect::<Result<Vec<_>>>()?;
    CurveFile::new(Format::Csv, curves)
}

#[derive(Serialize, Deserialize)]
struct JsonCurve {
    name: String,
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct JsonFile {
    curves: Vec<JsonCurve>,
}

pub fn parse_json(text: &str) -> Result<CurveFile> {
    let file: JsonFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let curves = file
        .curves
        .into_iter()
        .map(|c| {
            if let Some(bad) = c.vertices.iter().find(|v| v.len() != c.dim) {
                return Err(Error::DimensionMismatch(c.dim, bad.len()));
            }
            let curve = Curve::from_flat(c.dim, c.vertices.concat())?;
            Ok(NamedCurve { name: c.name, curve })
        })
        .collect::<Result<Vec<_>>>()?;
    CurveFile::new(Format::Json, curves)
}

pub fn read_curve_file(path: &Path) -> Result<CurveFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    match Format::from_path(path) {
        Format::Json => parse_json(&text),
        Format::Csv => parse_csv(&text),
    }
}

const AXES: [&str; 8] = ["x", "y", "z", "w", "x4", "x5", "x6", "x7"];

/// CSV with a `name` column followed by `x,y,...`.
pub fn to_csv(curves: &[NamedCurve]) -> Result<String> {
    let dim = curves.first().map_or(0, |c| c.curve.dim());
    let mut out = String::from("name");
    for axis in &AXES[..dim] {
        write!(out, ",{axis}").unwrap();
    }
    out.push('\n');
    for c in curves {
        if c.curve.dim() != dim {
            return Err(Error::DimensionMismatch(dim, c.curve.dim()));
        }
        if c.name.contains([',', '"', '\n']) || c.name.starts_with('#') {
            return Err(Error::param(format!("curve name '{}' cannot be written to CSV", c.name)));
        }
        for v in c.curve.vertices() {
            out.push_str(&c.name);
            for x in v {
                // `Display` for f64 is the shortest string that parses back exactly.
                write!(out, ",{x}").unwrap();
            }
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn to_json(curves: &[NamedCurve]) -> String {
    let file = JsonFile {
        curves: curves
            .iter()
            .map(|c| JsonCurve {
                name: c.name.clone(),
                dim: c.curve.dim(),
                vertices: c.curve.vertices().map(<[f64]>::to_vec).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("curves serialize")
}

pub fn write_curve_file(path: &Path, curves: &[NamedCurve]) -> Result<()> {
    let text = match Format::from_path(path) {
        Format::Json => to_json(curves),
        Format::Csv => to_csv(curves)?,
    };
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Outcome of one algorithm run, as printed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub norm: String,
    pub n: usize,
    pub m: usize,
    pub value: f64,
    pub eps: Option<f64>,
    pub probes: usize,
    pub white_cells: usize,
    pub switching_cells: usize,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub const TSV_COLUMNS: [&'static str; 10] = [
        "algorithm",
        "norm",
        "n",
        "m",
        "value",
        "eps",
        "probes",
        "white_cells",
        "switching_cells",
        "wall_time_ms",
    ];

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn tsv_header() -> String {
        Self::TSV_COLUMNS.join("\t")
    }

    pub fn tsv_row(&self) -> String {
        let eps = self.eps.map_or_else(String::new, |e| e.to_string());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.algorithm,
            self.norm,
            self.n,
            self.m,
            self.value,
            eps,
            self.probes,
            self.white_cells,
            self.switching_cells,
            self.wall_time_ms
        )
    }
}

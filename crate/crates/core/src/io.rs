//! File formats: JSON dual matrices and vectors, CSV iteration traces.
//!
//! Matrix document:
//! ```json
//! { "n": 2, "standard": [[0, 1], [1, 0]], "dual": [[1, 1], [1, 1]] }
//! ```
//! Vector document:
//! ```json
//! { "length": 2, "standard": [1, 1], "dual": [0, 0] }
//! ```
//! Floats are written with shortest round-trip formatting, so a dump/load
//! cycle is bitwise exact.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DualMatrix, DualVector};
use crate::real::Matrix;
use crate::solver::IterationRecord;

#[derive(Debug, Serialize, Deserialize)]
struct MatrixDoc {
    n: usize,
    standard: Vec<Vec<f64>>,
    dual: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VectorDoc {
    length: usize,
    standard: Vec<f64>,
    dual: Vec<f64>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn check_rows(rows: &[Vec<f64>], n: usize, part: &str) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("'{part}' must be a {n}x{n} array")));
    }
    Ok(())
}

pub fn matrix_from_json(text: &str) -> Result<DualMatrix> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(parse_err)?;
    if doc.n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    check_rows(&doc.standard, doc.n, "standard")?;
    check_rows(&doc.dual, doc.n, "dual")?;
    DualMatrix::new(Matrix::from_rows(&doc.standard)?, Matrix::from_rows(&doc.dual)?)
}

pub fn matrix_to_json(a: &DualMatrix) -> String {
    let doc = MatrixDoc { n: a.n(), standard: a.standard().to_rows(), dual: a.dual().to_rows() };
    serde_json::to_string(&doc).expect("finite floats always serialize")
}

pub fn read_matrix(mut r: impl Read) -> Result<DualMatrix> {
    let mut text = String::new();
    r.read_to_string(&mut text).map_err(parse_err)?;
    matrix_from_json(&text)
}

pub fn vector_from_json(text: &str) -> Result<DualVector> {
    let doc: VectorDoc = serde_json::from_str(text).map_err(parse_err)?;
    if doc.standard.len() != doc.length || doc.dual.len() != doc.length {
        return Err(Error::Parse(format!("vector parts must have length {}", doc.length)));
    }
    DualVector::new(doc.standard, doc.dual)
}

pub fn vector_to_json(x: &DualVector) -> String {
    let doc = VectorDoc { length: x.len(), standard: x.standard().to_vec(), dual: x.dual().to_vec() };
    serde_json::to_string(&doc).expect("finite floats always serialize")
}

#[derive(Serialize)]
struct TraceRow {
    k: usize,
    lower_s: f64,
    lower_d: f64,
    upper_s: f64,
    upper_d: f64,
    gap_frn: f64,
    residual_frn: f64,
}

/// Writes `k,lower_s,lower_d,upper_s,upper_d,gap_frn,residual_frn` with a header row.
pub fn write_trace_csv(w: impl Write, trace: &[IterationRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in trace {
        wtr.serialize(TraceRow {
            k: r.k,
            lower_s: r.lower.standard,
            lower_d: r.lower.dual,
            upper_s: r.upper.standard,
            upper_d: r.upper.dual,
            gap_frn: r.gap_frn,
            residual_frn: r.residual_frn,
        })
        .map_err(parse_err)?;
    }
    wtr.flush().map_err(parse_err)
}

//! On-disk formats.
//!
//! Matrix CSV: one row per line, comma-separated decimal or scientific
//! tokens, no header. Values are written with 17 significant digits so a
//! write/read cycle reproduces every `f64` bit for bit.
//!
//! Edge file: a header line `n <N>`, then one whitespace-separated `i j`
//! pair per line with 0-based indices. Lines starting with `#` and blank
//! lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, EdgeSet};

/// Formats one value with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn parse_matrix_csv(text: &str) -> Result<DenseMatrix> {
    parse_matrix_inner(text, None)
}

fn parse_matrix_inner(text: &str, path: Option<&Path>) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split(',') {
            let tok = tok.trim();
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("not a number: {tok:?}")))?;
            if !v.is_finite() {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("non-finite value {tok:?}"),
                ));
            }
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("ragged row: {} columns, expected {w}", row.len()),
                ))
            }
            _ => {}
        }
        rows.push(row);
    }
    let Some(width) = width else {
        return Err(Error::parse(path, 1, "empty matrix file"));
    };
    if width != rows.len() {
        return Err(Error::Dimension(format!(
            "matrix is not square: {} rows, {width} columns",
            rows.len()
        )));
    }
    DenseMatrix::from_rows(&rows)
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_inner(&text, Some(path))
}

pub fn matrix_to_csv(m: &DenseMatrix) -> String {
    let mut out = String::with_capacity(m.n() * m.n() * 25);
    for row in m.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, matrix_to_csv(m)).map_err(|e| Error::io(path, e))
}

pub fn parse_edges(text: &str) -> Result<EdgeSet> {
    parse_edges_inner(text, None)
}

fn parse_edges_inner(text: &str, path: Option<&Path>) -> Result<EdgeSet> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some(nodes) = n else {
            match toks.as_slice() {
                ["n", count] => {
                    let count: usize = count.parse().map_err(|_| {
                        Error::parse(path, lineno, format!("bad node count {count:?}"))
                    })?;
                    if count < 2 {
                        return Err(Error::parse(path, lineno, "need at least 2 nodes"));
                    }
                    n = Some(count);
                    continue;
                }
                _ => return Err(Error::parse(path, lineno, "expected header `n <N>`")),
            }
        };
        let [a, b] = toks.as_slice() else {
            return Err(Error::parse(path, lineno, "expected `i j`"));
        };
        let index = |t: &str| -> Result<usize> {
            t.parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad node index {t:?}")))
        };
        let (i, j) = (index(a)?, index(b)?);
        if i >= nodes || j >= nodes {
            return Err(Error::InvalidEdge(format!(
                "line {lineno}: edge ({i}, {j}) out of range for n = {nodes}"
            )));
        }
        if i == j {
            return Err(Error::InvalidEdge(format!(
                "line {lineno}: self-loop ({i}, {i})"
            )));
        }
        edges.push((i, j));
    }
    let Some(nodes) = n else {
        return Err(Error::parse(path, 1, "missing header `n <N>`"));
    };
    EdgeSet::new(nodes, edges)
}

pub fn read_edges(path: impl AsRef<Path>) -> Result<EdgeSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edges_inner(&text, Some(path))
}

pub fn edges_to_string(e: &EdgeSet) -> String {
    let mut out = format!("n {}\n", e.n());
    for (i, j) in e.iter() {
        writeln!(out, "{i} {j}").unwrap();
    }
    out
}

pub fn write_edges(e: &EdgeSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, edges_to_string(e)).map_err(|e| Error::io(path, e))
}

//! Plain-text matrix, vector, and feature-table files.
//!
//! Matrix file: line 1 is `n`, then `n` whitespace-separated rows.
//! Vector file: line 1 is `n`, then `n` values.
//! Feature table: CSV, one row per point, numeric columns only; a single
//! leading header line is tolerated and skipped.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use latred_core::linalg::SymMatrix;

use crate::csvout::fmt_f64;

pub fn write_matrix(path: &Path, m: &SymMatrix) -> Result<()> {
    let n = m.n();
    let mut text = String::new();
    text.push_str(&format!("{}\n", n));
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| fmt_f64(m.get(i, j))).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing matrix to {}", path.display()))
}

pub fn read_matrix(path: &Path) -> Result<SymMatrix> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading matrix from {}", path.display()))?;
    let mut tokens = text.split_whitespace();
    let n: usize = tokens
        .next()
        .context("matrix file is empty")?
        .parse()
        .context("matrix file must start with its dimension")?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let tok = tokens
                .next()
                .with_context(|| format!("matrix entry ({}, {}) missing", i, j))?;
            row.push(
                tok.parse::<f64>()
                    .with_context(|| format!("bad entry ({}, {})", i, j))?,
            );
        }
        rows.push(row);
    }
    if tokens.next().is_some() {
        bail!("matrix file has trailing data");
    }
    Ok(SymMatrix::from_rows(&rows)?)
}

pub fn write_vector(path: &Path, v: &[f64]) -> Result<()> {
    let mut text = String::new();
    text.push_str(&format!("{}\n", v.len()));
    for x in v {
        text.push_str(&fmt_f64(*x));
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing vector to {}", path.display()))
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading vector from {}", path.display()))?;
    let mut tokens = text.split_whitespace();
    let n: usize = tokens
        .next()
        .context("vector file is empty")?
        .parse()
        .context("vector file must start with its length")?;
    let values: Vec<f64> = tokens
        .map(|t| t.parse::<f64>().context("bad vector entry"))
        .collect::<Result<_>>()?;
    if values.len() != n {
        bail!(
            "vector file declares {} values but holds {}",
            n,
            values.len()
        );
    }
    Ok(values)
}

/// Reads a numeric CSV feature table; one leading non-numeric header line
/// is skipped.
pub fn read_features(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading features from {}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if lineno == 0 => continue, // header line
            Err(e) => bail!("line {}: {}", lineno + 1, e),
        }
    }
    if rows.is_empty() {
        bail!("feature table {} has no numeric rows", path.display());
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        let m = SymMatrix::from_fn(3, |i, j| if i == j { 2.0 } else { 1.0 / 3.0 }).unwrap();
        write_matrix(&path, &m).unwrap();
        let back = read_matrix(&path).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn vector_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.txt");
        let v = vec![0.1, -2.5, 1.0 / 7.0];
        write_vector(&path, &v).unwrap();
        assert_eq!(read_vector(&path).unwrap(), v);
    }

    #[test]
    fn features_with_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        std::fs::write(&path, "x,y\n1.0,2.0\n3.0,4.0\n").unwrap();
        let rows = read_features(&path).unwrap();
        assert_eq!(rows, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn malformed_files_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "2\n1.0 2.0\n3.0\n").unwrap();
        assert!(read_matrix(&path).is_err());
    }
}

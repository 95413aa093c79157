//! Sample files and estimation reports.
//!
//! Sample files are CSV with one sample per row and one column per time
//! step. A header row is optional and lines starting with `#` are comments.

use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

/// Parses samples; errors carry the 1-based line number.
pub fn parse_samples(text: &str) -> anyhow::Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.context("malformed CSV")?;
        let line = rec.position().map_or(i as u64 + 1, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => {
                if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
                    bail!("line {line}: non-finite value {bad}");
                }
                if let Some(first) = rows.first() {
                    if first.len() != v.len() {
                        bail!(
                            "line {line}: expected {} columns, found {}",
                            first.len(),
                            v.len()
                        );
                    }
                }
                rows.push(v);
            }
            // A non-numeric first data row is a header.
            Err(_) if rows.is_empty() && i == 0 => continue,
            Err(_) => {
                let col = rec
                    .iter()
                    .position(|f| f.parse::<f64>().is_err())
                    .unwrap_or(0);
                bail!(
                    "line {line}, column {}: `{}` is not a number",
                    col + 1,
                    rec.get(col).unwrap_or("")
                );
            }
        }
    }
    if rows.is_empty() {
        bail!("no samples found");
    }
    Ok(rows)
}

pub fn read_samples(path: &Path) -> anyhow::Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read samples from {}", path.display()))?;
    parse_samples(&text).with_context(|| format!("in {}", path.display()))
}

pub fn write_samples(path: &Path, samples: &[Vec<f64>]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for x in samples {
        w.write_record(x.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Report written by `toepcov estimate`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub estimator: String,
    pub alpha0: Option<f64>,
    pub alpha: Option<Vec<f64>>,
    pub order: Option<usize>,
    pub family_id: Option<String>,
    pub loglik: Option<f64>,
    pub nmse_c: Option<f64>,
    pub nmse_icm: Option<f64>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub wall_ms: f64,
    /// First column of the covariance estimate when it is Toeplitz.
    pub cm: Option<Vec<f64>>,
    /// Full covariance estimate when it is not Toeplitz, row by row.
    pub cm_matrix: Option<Vec<Vec<f64>>>,
    /// Inverse covariance estimate, row by row, when requested.
    pub icm: Option<Vec<Vec<f64>>>,
    pub hyperparameters: std::collections::BTreeMap<String, String>,
    pub flags: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).context("malformed report")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_comments() {
        let rows = parse_samples("# data\nx0,x1\n1, 2\n\n3,4.5\n").unwrap();
        assert_eq!(rows, vec![vec![1.0, 2.0], vec![3.0, 4.5]]);
    }

    #[test]
    fn errors_name_the_line() {
        let e = format!("{:#}", parse_samples("1,2\n3,x\n").unwrap_err());
        assert!(e.contains("line 2"), "{e}");
        let e = format!("{:#}", parse_samples("1,2\n3\n").unwrap_err());
        assert!(e.contains("line 2"), "{e}");
        assert!(parse_samples("# nothing\n").is_err());
    }
}

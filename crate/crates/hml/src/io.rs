//! Matrix file format and report writing.
//!
//! Matrices travel as `{"n": int, "data": [[row], [row], ...]}`; anything
//! non-square or with a negative entry is rejected with a descriptive
//! error. Matrix files are emitted with the same 17-significant-digit float
//! rendering as reports, so a write/read round trip is exact.

use crate::error::{Error, Result};
use crate::matrix::NonNegativeMatrix;
use crate::report::fmt_f64;
use serde::Deserialize;
use std::path::Path;

#[derive(Deserialize)]
struct MatrixJson {
    n: usize,
    data: Vec<Vec<f64>>,
}

/// Parses the matrix JSON format.
pub fn parse_matrix_json(text: &str) -> Result<NonNegativeMatrix> {
    let raw: MatrixJson = serde_json::from_str(text)
        .map_err(|e| Error::Parse { message: format!("matrix json: {e}") })?;
    if raw.data.len() != raw.n {
        return Err(Error::Parse {
            message: format!("declared n = {} but data has {} rows", raw.n, raw.data.len()),
        });
    }
    for (i, row) in raw.data.iter().enumerate() {
        if row.len() != raw.n {
            return Err(Error::Parse {
                message: format!("row {i} has {} entries, expected {}", row.len(), raw.n),
            });
        }
    }
    NonNegativeMatrix::from_rows(&raw.data)
}

pub fn matrix_to_json(m: &NonNegativeMatrix) -> String {
    let n = m.n();
    let mut out = String::new();
    out.push_str("{\"n\":");
    out.push_str(&n.to_string());
    out.push_str(",\"data\":[");
    for i in 0..n {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(m.get(i, j)));
        }
        out.push(']');
    }
    out.push_str("]}\n");
    out
}

pub fn load_matrix(path: &Path) -> Result<NonNegativeMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix_json(&text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let m = NonNegativeMatrix::from_rows(&[
            vec![0.0, 1.0 / 3.0, std::f64::consts::PI],
            vec![1e-300, 2.5, 0.1],
            vec![7.0, 0.0, 1e10],
        ])
        .unwrap();
        let text = matrix_to_json(&m);
        let back = parse_matrix_json(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn rejects_negative_and_nonsquare() {
        assert!(matches!(
            parse_matrix_json(r#"{"n":2,"data":[[0,1],[0,-1]]}"#),
            Err(Error::NegativeEntry { .. })
        ));
        assert!(parse_matrix_json(r#"{"n":2,"data":[[0,1,2],[0,1,2]]}"#).is_err());
        assert!(parse_matrix_json(r#"{"n":3,"data":[[0,1],[0,1]]}"#).is_err());
        assert!(parse_matrix_json("not json").is_err());
    }

    #[test]
    fn load_reports_missing_file() {
        assert!(matches!(
            load_matrix(Path::new("/nonexistent/matrix.json")),
            Err(Error::Io { .. })
        ));
    }
}

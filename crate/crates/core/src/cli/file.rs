//! JSON file formats read and written by the command-line tool.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::MetricLieAlgebra;
use crate::lie::LieAlgebra;
use crate::linalg::{Matrix, SymmetricForm, Tolerance, Vector};

/// One `[e_i, e_j] = Σ_k coeffs[k] e_k` record, `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, f64>,
}

/// A metric Lie algebra on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_names: Option<Vec<String>>,
    pub brackets: Vec<BracketRecord>,
    pub metric: Vec<Vec<f64>>,
}

/// Extension data `(D, K, L)` for `double-extend`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionFile {
    #[serde(rename = "D")]
    pub d: Vec<Vec<f64>>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<f64>>,
    #[serde(rename = "L")]
    pub l: Vec<f64>,
}

pub fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn matrix_from_rows(rows: &[Vec<f64>], n: usize, what: &str) -> Result<Matrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{what} must be a {n} × {n} array")));
    }
    Ok(Matrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl AlgebraFile {
    pub fn from_metric_algebra(m: &MetricLieAlgebra) -> Self {
        let alg = m.algebra();
        let brackets = alg
            .structure()
            .iter()
            .filter_map(|(&(i, j), v)| {
                let coeffs: BTreeMap<usize, f64> =
                    v.iter().enumerate().filter(|(_, &c)| c != 0.0).map(|(k, &c)| (k, c)).collect();
                (!coeffs.is_empty()).then_some(BracketRecord { i, j, coeffs })
            })
            .collect();
        Self {
            dim: m.dim(),
            basis_names: alg.basis_names().map(<[String]>::to_vec),
            brackets,
            metric: rows(m.gram()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Structure constants, with malformed bracket records reported as
    /// parse errors.
    pub fn algebra(&self) -> Result<LieAlgebra> {
        let n = self.dim;
        let mut entries = Vec::with_capacity(self.brackets.len());
        for (idx, rec) in self.brackets.iter().enumerate() {
            if rec.i >= rec.j {
                return Err(Error::Parse(format!("brackets[{idx}]: need i < j, found i = {}, j = {}", rec.i, rec.j)));
            }
            if rec.j >= n {
                return Err(Error::Parse(format!("brackets[{idx}]: index {} out of range for dim {n}", rec.j)));
            }
            let mut v = Vector::zeros(n);
            for (&k, &c) in &rec.coeffs {
                if k >= n {
                    return Err(Error::Parse(format!("brackets[{idx}].coeffs: index {k} out of range for dim {n}")));
                }
                v[k] = c;
            }
            entries.push(((rec.i, rec.j), v));
        }
        let alg = LieAlgebra::new(n, entries).map_err(|e| Error::Parse(e.to_string()))?;
        match &self.basis_names {
            Some(names) => alg.with_basis_names(names.clone()).map_err(|e| Error::Parse(format!("basis_names: {e}"))),
            None => Ok(alg),
        }
    }

    pub fn gram(&self) -> Result<Matrix> {
        let g = matrix_from_rows(&self.metric, self.dim, "metric")?;
        if !g.iter().all(|x| x.is_finite()) {
            return Err(Error::Parse("metric has non-finite entries".into()));
        }
        Ok(g)
    }

    pub fn metric_algebra(&self, tol: &Tolerance) -> Result<MetricLieAlgebra> {
        let alg = self.algebra()?;
        let g = self.gram()?;
        let alg = alg.validated(tol).map_err(|e| Error::Validation(e.to_string()))?;
        let form = SymmetricForm::new(g, tol).map_err(|e| match e {
            Error::DegenerateForm { smallest } => {
                Error::Validation(format!("metric fails nondegeneracy (smallest singular value {smallest:.3e})"))
            }
            Error::NotSymmetric { residual } => {
                Error::Validation(format!("metric fails symmetry (asymmetry {residual:.3e})"))
            }
            other => Error::Validation(other.to_string()),
        })?;
        MetricLieAlgebra::new(alg, form)
    }
}

impl ExtensionFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn parts(&self, n: usize) -> Result<(Matrix, Matrix, Vector)> {
        let d = matrix_from_rows(&self.d, n, "D")?;
        let k = matrix_from_rows(&self.k, n, "K")?;
        if self.l.len() != n {
            return Err(Error::Parse(format!("L must have length {n}")));
        }
        Ok((d, k, Vector::from_vec(self.l.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS: &str = r#"{
        "dim": 3,
        "brackets": [{"i": 0, "j": 1, "coeffs": {"2": 1.0}}],
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let f = AlgebraFile::parse(HEIS).unwrap();
        let m = f.metric_algebra(&Tolerance::default()).unwrap();
        assert_eq!(m.algebra().constant(0, 1, 2), 1.0);
        let back = AlgebraFile::from_metric_algebra(&m);
        assert_eq!(back, f);
        let text = serde_json::to_string(&back).unwrap();
        assert_eq!(AlgebraFile::parse(&text).unwrap(), f);
    }

    #[test]
    fn bad_records_are_parse_errors() {
        let swapped = HEIS.replace(r#""i": 0, "j": 1"#, r#""i": 1, "j": 1"#);
        let f = AlgebraFile::parse(&swapped).unwrap();
        assert!(matches!(f.algebra(), Err(Error::Parse(_))));
        assert!(matches!(AlgebraFile::parse("{\"dim\": 3"), Err(Error::Parse(_))));
        assert!(matches!(AlgebraFile::parse(&HEIS.replace("\"dim\"", "\"dims\"")), Err(Error::Parse(_))));
    }

    #[test]
    fn degenerate_metric_is_validation_error() {
        let bad = HEIS.replace("[0, 0, 1]]", "[0, 0, 0]]");
        let f = AlgebraFile::parse(&bad).unwrap();
        match f.metric_algebra(&Tolerance::default()) {
            Err(Error::Validation(msg)) => assert!(msg.contains("nondegeneracy")),
            other => panic!("unexpected {other:?}"),
        }
    }
}

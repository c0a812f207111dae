//! Labeled observation matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// An n x k sample of real observations with column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    labels: Vec<String>,
    x: DMatrix<f64>,
}

impl DataMatrix {
    /// Wraps an observation matrix (rows are observations). All entries must
    /// be finite and the label count must match the column count.
    pub fn new(x: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != x.ncols() {
            return Err(Error::DimensionMismatch {
                expected: x.ncols(),
                got: labels.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("data contains non-finite entries".into()));
        }
        Ok(DataMatrix { labels, x })
    }

    /// Wraps an observation matrix with generated labels `t1..tk`.
    pub fn from_matrix(x: DMatrix<f64>) -> Result<Self> {
        let labels = (1..=x.ncols()).map(|j| format!("t{j}")).collect();
        DataMatrix::new(x, labels)
    }

    /// Builds from row-major data with generated labels `t1..tk`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InsufficientData { n: 0, needed: 1 });
        }
        let k = rows[0].len();
        if k == 0 {
            return Err(Error::Domain("rows must have at least one column".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(Error::Domain(format!(
                    "row {i} has {} columns, expected {k}",
                    r.len()
                )));
            }
        }
        let x = DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]);
        let labels = (1..=k).map(|j| format!("t{j}")).collect();
        DataMatrix::new(x, labels)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn k(&self) -> usize {
        self.x.ncols()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn row(&self, i: usize) -> DVector<f64> {
        self.x.row(i).transpose()
    }

    /// One column as a plain vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.x.column(j).iter().copied().collect()
    }
}

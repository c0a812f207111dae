//! Unconstrained parameter encodings for the optimizer.
//!
//! Scale matrices are passed through a log-Cholesky map: `Omega = L L'` with
//! the diagonal of `L` stored in log space and the strict lower triangle
//! stored raw. Every real vector of the right length decodes to a symmetric
//! positive definite matrix, so the simplex search never has to reject a
//! step on feasibility grounds. Degrees of freedom use a plain log map for
//! the same reason.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numerics::cholesky;

/// Number of free parameters in a k-by-k symmetric positive definite matrix.
pub(crate) fn spd_len(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Log-Cholesky coordinates of a symmetric positive definite matrix, column
/// by column: the log of the diagonal pivot, then the raw entries below it.
pub(crate) fn encode_spd(omega: &DMatrix<f64>) -> Result<Vec<f64>> {
    let l = cholesky(omega)?;
    let k = l.nrows();
    let mut theta = Vec::with_capacity(spd_len(k));
    for j in 0..k {
        theta.push(l[(j, j)].ln());
        for i in (j + 1)..k {
            theta.push(l[(i, j)]);
        }
    }
    Ok(theta)
}

/// Inverse of [`encode_spd`]. `theta` must hold exactly `spd_len(k)` values.
pub(crate) fn decode_spd(theta: &[f64], k: usize) -> Result<DMatrix<f64>> {
    if theta.len() != spd_len(k) {
        return Err(Error::DimensionMismatch {
            expected: spd_len(k),
            got: theta.len(),
        });
    }
    let mut l = DMatrix::zeros(k, k);
    let mut idx = 0;
    for j in 0..k {
        l[(j, j)] = theta[idx].exp();
        idx += 1;
        for i in (j + 1)..k {
            l[(i, j)] = theta[idx];
            idx += 1;
        }
    }
    Ok(&l * l.transpose())
}

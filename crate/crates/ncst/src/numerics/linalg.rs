//! Small dense linear algebra on top of `nalgebra`.
//!
//! Matrices here are tiny (k <= 6 in practice), so the factorizations are
//! written for control over failure behavior rather than speed: the Cholesky
//! rejects near-singular input at a relative pivot tolerance instead of only
//! at exact non-positivity.

use nalgebra::{DMatrix, DVector};

use crate::config;
use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837877066409345483560659472811;

/// Checks that `a` is square and symmetric within the repo-wide relative
/// tolerance.
pub fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for i in 0..a.nrows() {
        for j in (i + 1)..a.ncols() {
            if (a[(i, j)] - a[(j, i)]).abs() > config::SYMMETRY_TOL * scale {
                return Err(Error::NotPositiveDefinite(format!(
                    "asymmetric at ({i}, {j}): {} vs {}",
                    a[(i, j)],
                    a[(j, i)]
                )));
            }
        }
    }
    Ok(())
}

/// Lower-triangular Cholesky factor L with `A = L L^T`.
///
/// Fails with `NotPositiveDefinite` when any pivot falls at or below
/// `PIVOT_REL_TOL` times the largest diagonal entry, so nearly singular
/// matrices are rejected rather than factored into garbage.
pub fn cholesky(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_symmetric(a)?;
    let n = a.nrows();
    if n == 0 {
        return Err(Error::Domain("cannot factor an empty matrix".into()));
    }
    let max_diag = (0..n).fold(0.0f64, |m, i| m.max(a[(i, i)]));
    if max_diag <= 0.0 {
        return Err(Error::NotPositiveDefinite(
            "no positive diagonal entry".into(),
        ));
    }
    let pivot_floor = config::PIVOT_REL_TOL * max_diag;
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= pivot_floor {
            return Err(Error::NotPositiveDefinite(format!(
                "pivot {d:e} at column {j} (floor {pivot_floor:e})"
            )));
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / dj;
        }
    }
    Ok(l)
}

/// Solves `L x = b` for lower-triangular L.
pub fn solve_lower(l: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = l.nrows();
    let mut x = b.clone();
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= l[(i, k)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Inverse of a symmetric positive definite matrix via its Cholesky factor.
pub fn spd_inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let l = cholesky(a)?;
    let n = a.nrows();
    let mut inv = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = DVector::zeros(n);
        e[j] = 1.0;
        // Forward then back substitution: A^{-1} e = L^{-T} L^{-1} e.
        let y = solve_lower(&l, &e);
        let mut x = y;
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= l[(k, i)] * x[k];
            }
            x[i] = s / l[(i, i)];
        }
        inv.set_column(j, &x);
    }
    // Symmetrize away roundoff.
    let inv_t = inv.transpose();
    Ok((inv + inv_t) * 0.5)
}

/// Eigenvalues and eigenvectors of a symmetric matrix, sorted by descending
/// eigenvalue. Eigenvector signs are normalized so the entry of largest
/// magnitude in each column is positive.
pub fn sym_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_symmetric(a)?;
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let mut values = Vec::with_capacity(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        let mut best = 0;
        for i in 1..n {
            if col[i].abs() > col[best].abs() {
                best = i;
            }
        }
        let sign = if col[best] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[(i, dst)] = sign * col[i];
        }
    }
    Ok((values, vectors))
}

/// Symmetric positive semidefinite square root via eigendecomposition.
/// Eigenvalues within roundoff below zero are clamped; more negative ones
/// fail the input as not PSD.
pub fn sym_sqrt(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (values, vectors) = sym_eigen(a)?;
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let n = a.nrows();
    let mut root_vals = DVector::zeros(n);
    for (i, &v) in values.iter().enumerate() {
        if v < -1e-10 * scale {
            return Err(Error::NotPositiveDefinite(format!(
                "negative eigenvalue {v:e} in matrix square root"
            )));
        }
        root_vals[i] = v.max(0.0).sqrt();
    }
    let mut scaled = vectors.clone();
    for j in 0..n {
        for i in 0..n {
            scaled[(i, j)] *= root_vals[j];
        }
    }
    Ok(&scaled * vectors.transpose())
}

/// Log-density of the multivariate normal N(mean, cov) at x.
pub fn mvn_logpdf(x: &DVector<f64>, mean: &DVector<f64>, cov: &DMatrix<f64>) -> Result<f64> {
    if x.len() != mean.len() {
        return Err(Error::DimensionMismatch {
            expected: mean.len(),
            got: x.len(),
        });
    }
    if cov.nrows() != mean.len() {
        return Err(Error::DimensionMismatch {
            expected: mean.len(),
            got: cov.nrows(),
        });
    }
    let l = cholesky(cov)?;
    Ok(mvn_logpdf_chol(x, mean, &l))
}

/// Log-density of N(mean, L L^T) at x given the Cholesky factor directly.
pub fn mvn_logpdf_chol(x: &DVector<f64>, mean: &DVector<f64>, l: &DMatrix<f64>) -> f64 {
    let k = mean.len() as f64;
    let z = solve_lower(l, &(x - mean));
    let mut log_det_half = 0.0;
    for i in 0..l.nrows() {
        log_det_half += l[(i, i)].ln();
    }
    -0.5 * (k * LN_2PI + z.norm_squared()) - log_det_half
}

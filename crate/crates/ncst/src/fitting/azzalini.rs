//! Densities for the comparison families: the multivariate Student t and the
//! multivariate skew-t in its usual formulation, where the heavy-tail mixing
//! is applied to a centered skew-normal and the location is added afterward.
//! Both have closed-form densities, unlike the shared-denominator family this
//! crate is built around, so their likelihoods are exact.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::{cholesky, log_gamma, pairwise_sum, solve_lower, student_t_cdf};

/// Precomputed pieces of the skew-t density for repeated evaluation over a
/// dataset with fixed parameters.
pub(crate) struct AzzaliniStKernel {
    xi: DVector<f64>,
    l: DMatrix<f64>,
    skew_dir: DVector<f64>,
    r: f64,
    kf: f64,
    /// `ln 2 + ln Gamma((r+k)/2) - ln Gamma(r/2) - (k/2) ln(r pi) - sum ln L_ii`.
    log_norm: f64,
    symmetric: bool,
}

impl AzzaliniStKernel {
    pub(crate) fn new(
        xi: &DVector<f64>,
        omega: &DMatrix<f64>,
        alpha: &DVector<f64>,
        r: f64,
    ) -> Result<Self> {
        let k = xi.len();
        if omega.nrows() != k || omega.ncols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: omega.nrows().max(omega.ncols()),
            });
        }
        if alpha.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: alpha.len(),
            });
        }
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::Domain(format!(
                "degrees of freedom must be positive and finite, got {r}"
            )));
        }
        if xi.iter().any(|v| !v.is_finite()) || alpha.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "location and shape entries must be finite".into(),
            ));
        }
        let l = cholesky(omega)?;
        let kf = k as f64;
        let log_det_half: f64 = (0..k).map(|i| l[(i, i)].ln()).sum();
        let log_norm = std::f64::consts::LN_2 + log_gamma((r + kf) / 2.0)
            - log_gamma(r / 2.0)
            - 0.5 * kf * (r * std::f64::consts::PI).ln()
            - log_det_half;
        if !log_norm.is_finite() {
            return Err(Error::Domain(format!(
                "density normalization overflowed at r = {r}"
            )));
        }
        let skew_dir = DVector::from_fn(k, |i, _| alpha[i] / omega[(i, i)].sqrt());
        let symmetric = alpha.iter().all(|&a| a == 0.0);
        Ok(AzzaliniStKernel {
            xi: xi.clone(),
            l,
            skew_dir,
            r,
            kf,
            log_norm,
            symmetric,
        })
    }

    pub(crate) fn logpdf(&self, x: &DVector<f64>) -> f64 {
        let d = x - &self.xi;
        let z = solve_lower(&self.l, &d);
        let q = z.norm_squared();
        let base = self.log_norm - 0.5 * (self.r + self.kf) * (1.0 + q / self.r).ln();
        if self.symmetric {
            // T_1(0) = 1/2 cancels the leading factor 2 exactly.
            return base - std::f64::consts::LN_2;
        }
        let arg = self.skew_dir.dot(&d) * ((self.r + self.kf) / (q + self.r)).sqrt();
        match student_t_cdf(arg, self.r + self.kf) {
            Ok(tail) if tail > 0.0 => base + tail.ln(),
            _ => f64::NEG_INFINITY,
        }
    }
}

/// Log-density of the multivariate Student t with location `xi`, scale
/// `omega`, and `r` degrees of freedom.
pub fn mvt_logpdf(
    x: &DVector<f64>,
    xi: &DVector<f64>,
    omega: &DMatrix<f64>,
    r: f64,
) -> Result<f64> {
    let kernel = AzzaliniStKernel::new(xi, omega, &DVector::zeros(xi.len()), r)?;
    if x.len() != xi.len() {
        return Err(Error::DimensionMismatch {
            expected: xi.len(),
            got: x.len(),
        });
    }
    Ok(kernel.logpdf(x))
}

/// Log-density of the multivariate skew-t in the scale-mixture-of-skew-normal
/// form: `2 t_k(x; xi, omega, r) T_1(alpha' w^{-1} (x - xi) sqrt((r+k)/(Q+r)); r+k)`
/// with `Q` the squared Mahalanobis distance and `w` the diagonal matrix of
/// scale square roots.
pub fn azzalini_st_logpdf(
    x: &DVector<f64>,
    xi: &DVector<f64>,
    omega: &DMatrix<f64>,
    alpha: &DVector<f64>,
    r: f64,
) -> Result<f64> {
    let kernel = AzzaliniStKernel::new(xi, omega, alpha, r)?;
    if x.len() != xi.len() {
        return Err(Error::DimensionMismatch {
            expected: xi.len(),
            got: x.len(),
        });
    }
    Ok(kernel.logpdf(x))
}

/// Sum of skew-t log-densities over the rows of `data`.
pub fn azzalini_st_loglik(
    data: &DMatrix<f64>,
    xi: &DVector<f64>,
    omega: &DMatrix<f64>,
    alpha: &DVector<f64>,
    r: f64,
) -> Result<f64> {
    if data.ncols() != xi.len() {
        return Err(Error::DimensionMismatch {
            expected: xi.len(),
            got: data.ncols(),
        });
    }
    let kernel = AzzaliniStKernel::new(xi, omega, alpha, r)?;
    let k = data.ncols();
    let mut x = DVector::zeros(k);
    let rows: Vec<f64> = (0..data.nrows())
        .map(|j| {
            for c in 0..k {
                x[c] = data[(j, c)];
            }
            kernel.logpdf(&x)
        })
        .collect();
    Ok(pairwise_sum(&rows))
}

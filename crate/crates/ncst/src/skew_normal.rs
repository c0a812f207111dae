//! Multivariate skew-normal distribution.
//!
//! Density at x: `2 phi_k(x - xi; Omega) Phi(alpha' omega^{-1} (x - xi))`,
//! where `phi_k` is the k-variate normal density, `Phi` the scalar normal
//! CDF, and `omega` the diagonal matrix of square roots of `diag(Omega)`.
//!
//! Sampling uses the conditioning representation: draw `(U0, U)` jointly
//! normal of dimension k+1 with unit variances, `corr(U) = Omega_z` (the
//! correlation matrix of `Omega`) and `corr(U0, U_i) = delta_i`; then
//! `Z = U` if `U0 > 0` else `-U`, and `X = xi + omega Z`. This is exact, with
//! no rejection step.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::{cholesky, mvn_logpdf_chol, norm_logcdf, solve_lower, sym_sqrt, RngStream};

const LN_2PI: f64 = 1.837877066409345483560659472811;
const SQRT_2_OVER_PI: f64 = 0.79788456080286535587989211986876373;

/// Parameters of a k-variate skew-normal distribution, with the derived
/// quantities the density and sampler need precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewNormalParams {
    xi: DVector<f64>,
    omega: DMatrix<f64>,
    alpha: DVector<f64>,
    // Derived.
    scale: DVector<f64>,      // sqrt(diag Omega)
    corr: DMatrix<f64>,       // Omega_z = omega^{-1} Omega omega^{-1}
    delta: DVector<f64>,      // Omega_z alpha / sqrt(1 + alpha' Omega_z alpha)
    omega_chol: DMatrix<f64>, // lower L with Omega = L L'
    log_norm: f64,            // -(k/2) ln 2pi - sum ln L_ii
    skew_dir: DVector<f64>,   // omega^{-1} alpha
    sampler: DMatrix<f64>,    // (k+1)x(k+1) factor T with T T' = [[1, d'],[d, Omega_z]]
}

impl SkewNormalParams {
    /// Validates dimensions and positive definiteness, and precomputes the
    /// derived quantities.
    pub fn new(xi: DVector<f64>, omega: DMatrix<f64>, alpha: DVector<f64>) -> Result<Self> {
        let k = xi.len();
        if k == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
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
        if xi.iter().chain(alpha.iter()).any(|v| !v.is_finite())
            || omega.iter().any(|v| !v.is_finite())
        {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        let omega_chol = cholesky(&omega)?;
        let scale = DVector::from_fn(k, |i, _| omega[(i, i)].sqrt());
        let mut corr = DMatrix::from_fn(k, k, |i, j| omega[(i, j)] / (scale[i] * scale[j]));
        for i in 0..k {
            corr[(i, i)] = 1.0;
        }
        let corr_alpha = &corr * &alpha;
        let denom = (1.0 + alpha.dot(&corr_alpha)).sqrt();
        let delta = corr_alpha / denom;

        let mut log_norm = -0.5 * (k as f64) * LN_2PI;
        for i in 0..k {
            log_norm -= omega_chol[(i, i)].ln();
        }
        let skew_dir = DVector::from_fn(k, |i, _| alpha[i] / scale[i]);

        // Joint correlation matrix for the conditioning sampler.
        let mut joint = DMatrix::zeros(k + 1, k + 1);
        joint[(0, 0)] = 1.0;
        for i in 0..k {
            joint[(0, i + 1)] = delta[i];
            joint[(i + 1, 0)] = delta[i];
            for j in 0..k {
                joint[(i + 1, j + 1)] = corr[(i, j)];
            }
        }
        // Cholesky when well conditioned; for extreme shape (|delta| -> 1)
        // the joint matrix approaches singularity, where the symmetric PSD
        // square root still samples the limit law exactly.
        let sampler = match cholesky(&joint) {
            Ok(l) => l,
            Err(_) => sym_sqrt(&joint)?,
        };

        Ok(SkewNormalParams {
            xi,
            omega,
            alpha,
            scale,
            corr,
            delta,
            omega_chol,
            log_norm,
            skew_dir,
            sampler,
        })
    }

    /// Convenience constructor from flat slices (`omega` row-major).
    pub fn from_parts(xi: &[f64], omega: &[f64], alpha: &[f64]) -> Result<Self> {
        let k = xi.len();
        if omega.len() != k * k {
            return Err(Error::DimensionMismatch {
                expected: k * k,
                got: omega.len(),
            });
        }
        SkewNormalParams::new(
            DVector::from_column_slice(xi),
            DMatrix::from_fn(k, k, |i, j| omega[i * k + j]),
            DVector::from_column_slice(alpha),
        )
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn xi(&self) -> &DVector<f64> {
        &self.xi
    }

    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    /// Square roots of the diagonal of Omega.
    pub fn scale(&self) -> &DVector<f64> {
        &self.scale
    }

    /// Correlation matrix Omega_z.
    pub fn corr(&self) -> &DMatrix<f64> {
        &self.corr
    }

    /// Shape in delta form; always satisfies `|delta_i| < 1`.
    pub fn delta(&self) -> &DVector<f64> {
        &self.delta
    }

    /// Lower Cholesky factor of Omega.
    pub fn omega_chol(&self) -> &DMatrix<f64> {
        &self.omega_chol
    }

    /// Normal normalization constant: `-(k/2) ln 2pi - (1/2) ln det Omega`.
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    /// `omega^{-1} alpha`, the vector the skewing argument projects onto.
    pub fn skew_dir(&self) -> &DVector<f64> {
        &self.skew_dir
    }

    pub fn is_symmetric(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0.0)
    }
}

/// Log-density of the skew-normal at `x`.
pub fn sn_logpdf(p: &SkewNormalParams, x: &DVector<f64>) -> Result<f64> {
    if x.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: x.len(),
        });
    }
    let base = mvn_logpdf_chol(x, &p.xi, &p.omega_chol);
    if p.is_symmetric() {
        // 2 Phi(0) = 1: reduces exactly to the normal density.
        return Ok(base);
    }
    let d = x - &p.xi;
    let w = p.skew_dir.dot(&d);
    Ok(std::f64::consts::LN_2 + base + norm_logcdf(w))
}

/// Draws `n` rows from the skew-normal; deterministic given the stream.
pub fn sn_sample(p: &SkewNormalParams, n: usize, stream: &RngStream) -> DMatrix<f64> {
    let k = p.dim();
    let mut out = DMatrix::zeros(n, k);
    let mut rng = stream.rng();
    let mut w = DVector::zeros(k + 1);
    use rand_distr::Distribution;
    let std_normal = rand_distr::StandardNormal;
    for row in 0..n {
        for i in 0..(k + 1) {
            w[i] = std_normal.sample(&mut rng);
        }
        let v = &p.sampler * &w;
        let flip = if v[0] > 0.0 { 1.0 } else { -1.0 };
        for j in 0..k {
            out[(row, j)] = p.xi[j] + p.scale[j] * flip * v[j + 1];
        }
    }
    out
}

/// Exact mean: `xi + sqrt(2/pi) * omega * delta`.
pub fn sn_mean(p: &SkewNormalParams) -> DVector<f64> {
    DVector::from_fn(p.dim(), |i, _| {
        p.xi[i] + SQRT_2_OVER_PI * p.scale[i] * p.delta[i]
    })
}

/// Precomputed quantities for evaluating many skew-normal log-densities at
/// points scaled by a per-draw factor, as the Monte Carlo mixture estimator
/// does. For a point `t` with scale `s`, the log-density at `s * t` is
/// recovered from three per-point scalars, so the per-draw cost is a few
/// flops plus one `norm_logcdf`.
pub(crate) struct ScaledSnKernel {
    pub log_norm2: f64, // ln 2 + log_norm (or log_norm when symmetric)
    pub symmetric: bool,
    pub b: DVector<f64>, // L^{-1} xi
    pub b2: f64,         // |b|^2
    pub s1: f64,         // skew_dir . xi
    l: DMatrix<f64>,
    skew_dir: DVector<f64>,
}

pub(crate) struct ScaledPoint {
    pub a2: f64, // |L^{-1} t|^2
    pub ab: f64, // (L^{-1} t) . (L^{-1} xi)
    pub u: f64,  // skew_dir . t
}

impl ScaledSnKernel {
    pub fn new(p: &SkewNormalParams) -> Self {
        let b = solve_lower(&p.omega_chol, &p.xi);
        let symmetric = p.is_symmetric();
        ScaledSnKernel {
            log_norm2: if symmetric {
                p.log_norm
            } else {
                std::f64::consts::LN_2 + p.log_norm
            },
            symmetric,
            b2: b.norm_squared(),
            s1: p.skew_dir.dot(&p.xi),
            b,
            l: p.omega_chol.clone(),
            skew_dir: p.skew_dir.clone(),
        }
    }

    pub fn prepare(&self, t: &DVector<f64>) -> ScaledPoint {
        let a = solve_lower(&self.l, t);
        ScaledPoint {
            a2: a.norm_squared(),
            ab: a.dot(&self.b),
            u: self.skew_dir.dot(t),
        }
    }

    /// Log-density of the skew-normal at `s * t` for a prepared point.
    #[inline]
    pub fn logpdf_scaled(&self, pt: &ScaledPoint, s: f64) -> f64 {
        let q = s * s * pt.a2 - 2.0 * s * pt.ab + self.b2;
        let base = self.log_norm2 - 0.5 * q;
        if self.symmetric {
            base
        } else {
            base + norm_logcdf(s * pt.u - self.s1)
        }
    }
}

//! Repo-wide numeric tolerances and defaults.
//!
//! Every hard-coded threshold used by the library lives here so that the
//! acceptance and property tests exercise the same constants the runtime
//! uses. Values are chosen to sit well above f64 noise for the matrix sizes
//! this crate targets (k <= 6) while still rejecting genuinely bad inputs.

/// Maximum relative asymmetry tolerated before a matrix is rejected as
/// non-symmetric. Scaled by the largest absolute entry (floor 1.0).
pub const SYMMETRY_TOL: f64 = 1e-10;

/// A Cholesky pivot at or below this fraction of the largest diagonal entry
/// fails the factorization as not positive definite.
pub const PIVOT_REL_TOL: f64 = 1e-12;

/// Reconstruction bound checked by the factorization tests: `L L^T` must
/// reproduce the input entrywise within this tolerance (relative to the
/// largest entry).
pub const CHOL_RECONSTRUCT_TOL: f64 = 1e-10;

/// Absolute error budget for `log_gamma` on `[0.1, 200]`.
pub const LOG_GAMMA_ABS_TOL: f64 = 1e-12;

/// Absolute error budget for the standard normal CDF.
pub const NORM_CDF_ABS_TOL: f64 = 1e-10;

/// `|cdf(x) + cdf(-x) - 1|` bound for the standard normal CDF, `|x| <= 8`.
pub const NORM_CDF_SYMMETRY_TOL: f64 = 1e-14;

/// Absolute error budget for the Student-t CDF.
pub const T_CDF_ABS_TOL: f64 = 1e-8;

/// Degrees of freedom above which the Student-t CDF switches to the
/// normal-plus-correction expansion (the correction keeps the switch well
/// below `T_CDF_ABS_TOL`).
pub const T_CDF_NORMAL_SWITCH: f64 = 3e4;

/// Entrywise tolerance for the idempotency check on the projected weight
/// matrix in the quadratic-form analysis (condition (i)).
pub const IDEMPOTENCY_TOL: f64 = 1e-8;

/// Tolerance for the two noncentrality expressions agreeing in the
/// quadratic-form analysis (condition (ii)), relative to `max(1, |lambda|)`.
pub const LAMBDA_CONSISTENCY_TOL: f64 = 1e-8;

/// Eigenvalues of the projected weight matrix above this threshold count
/// toward the projector rank; below it they are treated as zero. An
/// idempotent matrix has eigenvalues only near 0 and 1, so the midpoint is
/// the natural separator.
pub const RANK_EIGENVALUE_SPLIT: f64 = 0.5;

/// Tiny negative values of the affine-closure bracket (a PSD quadratic form
/// up to roundoff) at or above this bound are clamped to zero; anything more
/// negative is a hard error.
pub const AFFINE_BRACKET_CLAMP: f64 = -1e-10;

/// Default Monte Carlo draw count used while optimizing a likelihood.
pub const DEFAULT_FIT_M: usize = 2000;

/// Default Monte Carlo draw count used to recompute the log-likelihood at
/// the optimum for reporting (10x the fitting default).
pub const DEFAULT_REPORT_M: usize = 20_000;

/// Default Nelder-Mead convergence tolerance on the simplex value spread.
pub const DEFAULT_NM_TOL: f64 = 1e-6;

/// Default Nelder-Mead iteration budget per run.
pub const DEFAULT_NM_MAX_ITER: usize = 2000;

/// Default number of Nelder-Mead restarts from the incumbent.
pub const DEFAULT_NM_RESTARTS: usize = 2;

/// Default grid resolution per axis for density grids.
pub const DEFAULT_GRID_POINTS: usize = 200;

/// Percentile range (lower, upper) covered by density grids.
pub const GRID_PCT_RANGE: (f64, f64) = (0.1, 99.9);

/// Percentile at which heavy-tailed samples are truncated before
/// distributional comparisons (KS, Q-Q).
pub const TAIL_TRUNCATION_PCT: f64 = 99.9;

/// Default percentile box for contour/plot outputs in the CLI.
pub const DEFAULT_CONTOUR_TRUNCATION_PCT: f64 = 95.0;

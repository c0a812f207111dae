use thiserror::Error;

/// Errors produced by the distribution, transform, and fitting routines.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    /// A matrix required to be symmetric positive definite failed its
    /// Cholesky factorization (pivot at or below the relative tolerance).
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    /// A scalar or vector argument lies outside the mathematical domain of
    /// the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested moment does not exist for the given degrees of freedom.
    #[error("moment of order {order} undefined: requires df > {required}, got df = {df}")]
    MomentUndefined { order: u32, df: f64, required: f64 },

    /// Vector or matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A structural condition of the quadratic-form theory failed.
    #[error("quadratic-form {which} violated: {detail}")]
    ConditionViolated { which: &'static str, detail: String },

    /// The projected weight matrix has rank zero.
    #[error("projected weight matrix has rank zero")]
    RankZero,

    /// The sample admits no meaningful estimate (e.g. zero variance).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// Fewer observations than the operation requires.
    #[error("insufficient data: {n} observations, {needed} required")]
    InsufficientData { n: usize, needed: usize },

    /// The objective was not finite at the optimizer's starting point.
    #[error("objective is not finite at the initial point")]
    NonFiniteObjective,
}

pub type Result<T> = std::result::Result<T, Error>;

//! Shared plumbing for the `fit` and `compare` verbs: optimizer controls,
//! data loading with optional standardization, and the JSON shape of a
//! fitted model.

use std::path::Path;

use clap::Args;
use ncst::config::{
    DEFAULT_FIT_M, DEFAULT_NM_MAX_ITER, DEFAULT_NM_RESTARTS, DEFAULT_NM_TOL, DEFAULT_REPORT_M,
};
use ncst::{DMatrix, DataMatrix, FitOptions, FitResult, ModelFamily};
use serde::Serialize;

use crate::failure::Failure;
use crate::io::read_table;

/// Model family names accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyArg {
    /// Multivariate normal.
    Mvn,
    /// Skew-normal.
    Sn,
    /// Skew-t with location added after the heavy-tail mixing.
    Azst,
    /// Non-central skew-t (location mixed through the denominator).
    Ncst,
}

impl FamilyArg {
    pub fn family(self) -> ModelFamily {
        match self {
            FamilyArg::Mvn => ModelFamily::Mvn,
            FamilyArg::Sn => ModelFamily::SkewNormal,
            FamilyArg::Azst => ModelFamily::AzzaliniSkewT,
            FamilyArg::Ncst => ModelFamily::Ncst,
        }
    }
}

/// Optimizer and Monte Carlo controls shared by the fitting verbs.
#[derive(Debug, Args)]
pub struct FitControl {
    /// RNG seed for the Monte Carlo likelihood draws. Closed-form families
    /// ignore it; passing it is still required so reruns are reproducible
    /// by construction.
    #[arg(long)]
    pub seed: u64,

    /// Monte Carlo draws per likelihood evaluation during optimization.
    #[arg(short = 'M', long, default_value_t = DEFAULT_FIT_M)]
    pub mc_draws: usize,

    /// Monte Carlo draws for the final reported log-likelihood.
    #[arg(long, default_value_t = DEFAULT_REPORT_M)]
    pub report_draws: usize,

    /// Nelder-Mead value-spread convergence tolerance.
    #[arg(long, default_value_t = DEFAULT_NM_TOL)]
    pub nm_tol: f64,

    /// Nelder-Mead iteration cap per run.
    #[arg(long, default_value_t = DEFAULT_NM_MAX_ITER)]
    pub nm_max_iter: usize,

    /// Fresh-simplex restarts from the incumbent after the first run.
    #[arg(long, default_value_t = DEFAULT_NM_RESTARTS)]
    pub nm_restarts: usize,

    /// Standardize each column to zero mean and unit variance before
    /// fitting; estimates are then on the standardized scale.
    #[arg(long)]
    pub standardize: bool,
}

impl FitControl {
    pub fn options(&self) -> FitOptions {
        FitOptions {
            seed: self.seed,
            fit_draws: self.mc_draws,
            report_draws: self.report_draws,
            nm_tol: self.nm_tol,
            nm_max_iter: self.nm_max_iter,
            nm_restarts: self.nm_restarts,
        }
    }

    pub fn manifest_value(&self) -> serde_json::Value {
        serde_json::json!({
            "mc_draws": self.mc_draws,
            "report_draws": self.report_draws,
            "nm_tol": self.nm_tol,
            "nm_max_iter": self.nm_max_iter,
            "nm_restarts": self.nm_restarts,
            "standardize": self.standardize,
        })
    }
}

/// Per-column centering and scaling applied before fitting.
#[derive(Debug, Serialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

/// Loads a numeric CSV into a labeled data matrix, optionally standardizing
/// columns (sample standard deviation, n - 1 denominator).
pub fn load_data(
    path: &Path,
    standardize: bool,
) -> Result<(DataMatrix, Option<Standardization>), Failure> {
    let table = read_table(path)?;
    let n = table.rows.len();
    let k = table.k();
    let mut x = DMatrix::zeros(n, k);
    for (i, row) in table.rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            x[(i, j)] = v;
        }
    }

    let applied = if standardize {
        if n < 2 {
            return Err(Failure::invalid(
                "--standardize needs at least 2 rows to estimate a standard deviation",
            ));
        }
        let mut means = Vec::with_capacity(k);
        let mut sds = Vec::with_capacity(k);
        for j in 0..k {
            let col = x.column(j);
            let mean = col.sum() / n as f64;
            let ss: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
            let sd = (ss / (n as f64 - 1.0)).sqrt();
            if sd <= 0.0 {
                return Err(Failure::invalid(format!(
                    "--standardize: column {} ({}) has zero variance",
                    j + 1,
                    table.labels[j]
                )));
            }
            means.push(mean);
            sds.push(sd);
        }
        for i in 0..n {
            for j in 0..k {
                x[(i, j)] = (x[(i, j)] - means[j]) / sds[j];
            }
        }
        Some(Standardization { means, sds })
    } else {
        None
    };

    let data = DataMatrix::new(x, table.labels)?;
    Ok((data, applied))
}

/// JSON form of one fitted model.
#[derive(Debug, Serialize)]
pub struct FitJson {
    pub family: &'static str,
    pub xi: Vec<f64>,
    /// Scale matrix, row-major nested arrays.
    pub omega: Vec<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub r: Option<f64>,
    pub loglik: f64,
    pub n_params: usize,
    pub n_obs: usize,
    pub aic: f64,
    pub sic: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl FitJson {
    pub fn from_result(fit: &FitResult) -> Self {
        FitJson {
            family: fit.family.label(),
            xi: fit.xi.iter().copied().collect(),
            omega: (0..fit.omega.nrows())
                .map(|i| (0..fit.omega.ncols()).map(|j| fit.omega[(i, j)]).collect())
                .collect(),
            alpha: fit.alpha.as_ref().map(|a| a.iter().copied().collect()),
            r: fit.r,
            loglik: fit.loglik,
            n_params: fit.n_params,
            n_obs: fit.n_obs,
            aic: fit.aic,
            sic: fit.sic,
            converged: fit.converged,
            iterations: fit.iterations,
        }
    }
}

/// One line of the human-readable comparison table.
pub fn table_line(fit: &FitResult) -> String {
    format!(
        "{:<6} {:>16.4} {:>12.4} {:>12.4}{}",
        fit.family.label(),
        fit.loglik,
        fit.aic,
        fit.sic,
        if fit.converged { "" } else { "  *" }
    )
}

pub const TABLE_HEADER: &str = "Model    Log-Likelihood          AIC          SIC";

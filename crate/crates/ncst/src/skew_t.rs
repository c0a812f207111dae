//! The non-central skew-t distribution: sampler, Monte Carlo density and
//! likelihood, and analytical moments.
//!
//! The vector `T = X / sqrt(Y / r)`, where `X` is k-variate skew-normal with
//! location `xi`, scale `Omega`, and shape `alpha`, and `Y` is an independent
//! chi-squared variable with `r` degrees of freedom shared by all k
//! coordinates. Because the location is part of `X`, it is divided by the
//! mixing variable along with everything else; this is what distinguishes the
//! family from the usual skew-t construction in which location is added after
//! scaling, and it is why the density has no closed form.
//!
//! The density is an expectation over the mixing variable and is estimated by
//! Monte Carlo: with `s_i = sqrt(y_i / r)` for draws `y_i` from the
//! chi-squared, `f(t) ~= (1/M) sum_i f_SN(t * s_i) * s_i^k`, evaluated in log
//! space via log-sum-exp. For likelihood optimization the mixing draws can be
//! frozen (common random numbers) so the objective is a deterministic,
//! continuous function of the parameters: the frozen quantities are uniform
//! variates, mapped through the chi-squared quantile function at whatever `r`
//! is currently being evaluated, so varying `r` moves every `y_i` smoothly
//! instead of re-randomizing them.

use nalgebra::{DMatrix, DVector};

use crate::config::DEFAULT_FIT_M;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::numerics::{
    chi_squared_quantile, draw_chisq, draw_open01, log_gamma, pairwise_sum, RngStream,
};
use crate::skew_normal::{sn_mean, sn_sample, ScaledSnKernel, SkewNormalParams};

/// Substream tag for the skew-normal part of the sampler.
const TAG_SN: u64 = 1;
/// Substream tag for the chi-squared mixing draws of the sampler.
const TAG_CHISQ: u64 = 2;
/// Substream tag for the frozen common-random-numbers uniforms. Row indices
/// are used directly as tags in the independent-draws likelihood path, so
/// this must be out of reach of any realistic row count.
const TAG_CRN: u64 = u64::MAX;

/// Parameters of the non-central skew-t: a skew-normal parameter set plus the
/// mixing degrees of freedom `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct NcstParams {
    sn: SkewNormalParams,
    r: f64,
}

impl NcstParams {
    pub fn new(sn: SkewNormalParams, r: f64) -> Result<Self> {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::Domain(format!(
                "degrees of freedom r must be positive and finite, got {r}"
            )));
        }
        Ok(NcstParams { sn, r })
    }

    /// Convenience constructor from flat slices (`omega` row-major).
    pub fn from_parts(xi: &[f64], omega: &[f64], alpha: &[f64], r: f64) -> Result<Self> {
        NcstParams::new(SkewNormalParams::from_parts(xi, omega, alpha)?, r)
    }

    pub fn sn(&self) -> &SkewNormalParams {
        &self.sn
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.sn.dim()
    }
}

/// Settings for Monte Carlo density and likelihood evaluation.
///
/// `draws` is the number of mixing draws per density evaluation. With
/// `crn = true` (common random numbers) one frozen set of draws, determined
/// entirely by `(seed, draws)`, is reused for every data row and every call,
/// which makes the likelihood a deterministic function of the parameters.
/// With `crn = false` each data row consumes its own independent substream of
/// `seed`; results are still reproducible, but rows no longer share draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub draws: usize,
    pub seed: u64,
    pub crn: bool,
}

impl McConfig {
    pub fn new(draws: usize, seed: u64, crn: bool) -> Result<Self> {
        if draws == 0 {
            return Err(Error::Domain(
                "Monte Carlo draw count must be at least 1".into(),
            ));
        }
        Ok(McConfig { draws, seed, crn })
    }

    fn validate(&self) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::Domain(
                "Monte Carlo draw count must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            draws: DEFAULT_FIT_M,
            seed: 0,
            crn: true,
        }
    }
}

/// A frozen set of mixing uniforms for common-random-numbers evaluation.
///
/// The stored values are uniforms on (0, 1), not chi-squared draws: they are
/// pushed through the chi-squared quantile function at evaluation time, so
/// one `MixingDraws` value serves every `r` an optimizer visits, varying the
/// implied chi-squared draws continuously with `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingDraws {
    u: Vec<f64>,
}

impl MixingDraws {
    /// Generates the frozen uniform set for `(cfg.seed, cfg.draws)`. The
    /// `crn` flag is irrelevant here; the caller decides how to use the set.
    pub fn from_config(cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        let stream = RngStream::new(cfg.seed).substream(TAG_CRN);
        Ok(MixingDraws {
            u: draw_open01(&stream, cfg.draws),
        })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// Per-draw scale factors `s_i = sqrt(y_i / r)` and the log Jacobian terms
/// `k ln s_i` they contribute to the mixture estimator.
struct MixScales {
    s: Vec<f64>,
    jac: Vec<f64>,
}

impl MixScales {
    fn from_uniforms(u: &[f64], r: f64, k: usize) -> Result<Self> {
        let kf = k as f64;
        let mut s = Vec::with_capacity(u.len());
        let mut jac = Vec::with_capacity(u.len());
        for &ui in u {
            let y = chi_squared_quantile(ui, r)?;
            let si = (y / r).sqrt();
            s.push(si);
            jac.push(kf * si.ln());
        }
        Ok(MixScales { s, jac })
    }

    fn from_stream(stream: &RngStream, r: f64, m: usize, k: usize) -> Result<Self> {
        let y = draw_chisq(stream, r, m)?;
        let kf = k as f64;
        let mut s = Vec::with_capacity(m);
        let mut jac = Vec::with_capacity(m);
        for yi in y {
            let si = (yi / r).sqrt();
            s.push(si);
            jac.push(kf * si.ln());
        }
        Ok(MixScales { s, jac })
    }
}

/// Log of the mixture estimate at one prepared point: log-sum-exp over the
/// per-draw terms `log f_SN(s_i t) + k ln s_i`, minus `ln M`.
fn mc_logsumexp(
    kernel: &ScaledSnKernel,
    pt: &crate::skew_normal::ScaledPoint,
    scales: &MixScales,
    scratch: &mut Vec<f64>,
) -> f64 {
    let m = scales.s.len();
    scratch.clear();
    scratch.reserve(m);
    let mut max = f64::NEG_INFINITY;
    for i in 0..m {
        let term = kernel.logpdf_scaled(pt, scales.s[i]) + scales.jac[i];
        scratch.push(term);
        if term > max {
            max = term;
        }
    }
    if !max.is_finite() {
        return max;
    }
    let mut sum = 0.0;
    for &t in scratch.iter() {
        sum += (t - max).exp();
    }
    max + sum.ln() - (m as f64).ln()
}

/// Draws `n` rows `T_j = X_j / sqrt(Y_j / r)`, with the skew-normal vectors
/// and the mixing chi-squared draws taken from two fixed substreams of
/// `stream`. Deterministic given the stream.
pub fn ncst_sample(p: &NcstParams, n: usize, stream: &RngStream) -> DMatrix<f64> {
    let mut x = sn_sample(&p.sn, n, &stream.substream(TAG_SN));
    // r > 0 is a construction invariant of NcstParams.
    let y = draw_chisq(&stream.substream(TAG_CHISQ), p.r, n).expect("r > 0 by construction");
    for (j, yj) in y.iter().enumerate() {
        let f = (yj / p.r).sqrt().recip();
        for c in 0..x.ncols() {
            x[(j, c)] *= f;
        }
    }
    x
}

/// Monte Carlo log-density at a single point.
///
/// With `cfg.crn = true` the frozen draw set for `(cfg.seed, cfg.draws)` is
/// used, so repeated calls are bit-identical; with `crn = false` the draws
/// come from substream 0 of the seed (the same stream a one-row likelihood
/// would use).
pub fn ncst_mc_logpdf(t: &DVector<f64>, p: &NcstParams, cfg: &McConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.crn {
        return ncst_mc_logpdf_with_draws(t, p, &MixingDraws::from_config(cfg)?);
    }
    if t.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: t.len(),
        });
    }
    let stream = RngStream::new(cfg.seed).substream(0);
    let scales = MixScales::from_stream(&stream, p.r, cfg.draws, p.dim())?;
    let kernel = ScaledSnKernel::new(&p.sn);
    let mut scratch = Vec::new();
    Ok(mc_logsumexp(
        &kernel,
        &kernel.prepare(t),
        &scales,
        &mut scratch,
    ))
}

/// Monte Carlo log-density at a single point using a caller-held frozen draw
/// set. This is the common-random-numbers evaluation path.
///
/// When many points are evaluated at fixed parameters (grid scans, plotted
/// densities), prefer [`NcstMcDensity`], which maps the uniforms through the
/// chi-squared quantile once instead of once per point.
pub fn ncst_mc_logpdf_with_draws(
    t: &DVector<f64>,
    p: &NcstParams,
    draws: &MixingDraws,
) -> Result<f64> {
    NcstMcDensity::new(p, draws)?.logpdf(t)
}

/// A prepared Monte Carlo density evaluator for one `(parameters, draw set)`
/// pair: the chi-squared scale factors are computed at construction, so each
/// subsequent point costs only the kernel sweep over the draws.
pub struct NcstMcDensity {
    kernel: ScaledSnKernel,
    scales: MixScales,
    scratch: Vec<f64>,
    k: usize,
}

impl NcstMcDensity {
    pub fn new(p: &NcstParams, draws: &MixingDraws) -> Result<Self> {
        if draws.is_empty() {
            return Err(Error::Domain(
                "Monte Carlo draw count must be at least 1".into(),
            ));
        }
        Ok(NcstMcDensity {
            kernel: ScaledSnKernel::new(&p.sn),
            scales: MixScales::from_uniforms(&draws.u, p.r, p.dim())?,
            scratch: Vec::new(),
            k: p.dim(),
        })
    }

    /// Log of the mixture density estimate at `t`.
    pub fn logpdf(&mut self, t: &DVector<f64>) -> Result<f64> {
        if t.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: t.len(),
            });
        }
        let pt = self.kernel.prepare(t);
        Ok(mc_logsumexp(
            &self.kernel,
            &pt,
            &self.scales,
            &mut self.scratch,
        ))
    }
}

/// Monte Carlo log-likelihood: the sum of `ncst_mc_logpdf` over data rows.
///
/// With `cfg.crn = true` one frozen draw set is shared by every row and every
/// call, so the result is a deterministic function of `(data, p, cfg)` and
/// duplicating each data row doubles the value exactly. With `crn = false`
/// row `j` draws from substream `j` of the seed.
pub fn ncst_loglik(data: &DataMatrix, p: &NcstParams, cfg: &McConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.crn {
        return ncst_loglik_with_draws(data, p, &MixingDraws::from_config(cfg)?);
    }
    if data.k() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: data.k(),
        });
    }
    let kernel = ScaledSnKernel::new(&p.sn);
    let mut scratch = Vec::new();
    let mut row_logs = Vec::with_capacity(data.n());
    for j in 0..data.n() {
        let stream = RngStream::new(cfg.seed).substream(j as u64);
        let scales = MixScales::from_stream(&stream, p.r, cfg.draws, p.dim())?;
        let pt = kernel.prepare(&data.row(j));
        row_logs.push(mc_logsumexp(&kernel, &pt, &scales, &mut scratch));
    }
    Ok(pairwise_sum(&row_logs))
}

/// Monte Carlo log-likelihood with a caller-held frozen draw set, shared by
/// every row. This is the hot path of likelihood optimization: the uniforms
/// are mapped through the chi-squared quantile once per call, and each row
/// then costs a few arithmetic operations plus one normal log-CDF per draw.
pub fn ncst_loglik_with_draws(
    data: &DataMatrix,
    p: &NcstParams,
    draws: &MixingDraws,
) -> Result<f64> {
    if data.k() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: data.k(),
        });
    }
    if draws.is_empty() {
        return Err(Error::Domain(
            "Monte Carlo draw count must be at least 1".into(),
        ));
    }
    let scales = MixScales::from_uniforms(&draws.u, p.r, p.dim())?;
    let kernel = ScaledSnKernel::new(&p.sn);
    let mut scratch = Vec::new();
    let mut row_logs = Vec::with_capacity(data.n());
    for j in 0..data.n() {
        let pt = kernel.prepare(&data.row(j));
        row_logs.push(mc_logsumexp(&kernel, &pt, &scales, &mut scratch));
    }
    Ok(pairwise_sum(&row_logs))
}

/// `E[Y^{-k/2}]` for `Y` chi-squared with `r` degrees of freedom:
/// `Gamma((r-k)/2) / (2^{k/2} Gamma(r/2))`, finite exactly when `r > k`.
///
/// Two closed-form anchors pin the constant down: `k = 2` gives the classical
/// `E[1/Y] = 1/(r-2)`, and successive orders satisfy the recurrence
/// `E[Y^{-(k+2)/2}] = E[Y^{-k/2}] / (r - k - 2)`.
pub fn inv_chisq_half_moment(r: f64, k: u32) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::Domain(format!(
            "degrees of freedom must be finite, got {r}"
        )));
    }
    if r <= k as f64 {
        return Err(Error::MomentUndefined {
            order: k,
            df: r,
            required: k as f64,
        });
    }
    if k == 0 {
        return Ok(1.0);
    }
    let kf = k as f64;
    let log_val =
        log_gamma((r - kf) / 2.0) - 0.5 * kf * std::f64::consts::LN_2 - log_gamma(r / 2.0);
    Ok(log_val.exp())
}

/// Exact mean `sqrt(r) * E[Y^{-1/2}] * E[X]`, defined for `r > 1`.
pub fn ncst_mean(p: &NcstParams) -> Result<DVector<f64>> {
    if p.r <= 1.0 {
        return Err(Error::MomentUndefined {
            order: 1,
            df: p.r,
            required: 1.0,
        });
    }
    let factor = p.r.sqrt() * inv_chisq_half_moment(p.r, 1)?;
    Ok(sn_mean(&p.sn) * factor)
}

/// Componentwise raw moment `E[T_i^order]` via the factorization
/// `r^{order/2} * E[X_i^order] * E[Y^{-order/2}]`, with the skew-normal
/// moment `E[X_i^order]` estimated from `n_inner` sampler draws (there is no
/// closed form beyond the mean). Defined for `r > order`.
pub fn ncst_raw_moment(
    p: &NcstParams,
    order: u32,
    n_inner: usize,
    stream: &RngStream,
) -> Result<DVector<f64>> {
    if order == 0 {
        return Err(Error::Domain("moment order must be at least 1".into()));
    }
    if n_inner == 0 {
        return Err(Error::Domain("n_inner must be at least 1".into()));
    }
    if p.r <= order as f64 {
        return Err(Error::MomentUndefined {
            order,
            df: p.r,
            required: order as f64,
        });
    }
    let mix = p.r.powf(order as f64 / 2.0) * inv_chisq_half_moment(p.r, order)?;
    let x = sn_sample(&p.sn, n_inner, stream);
    let k = p.dim();
    let mut out = DVector::zeros(k);
    let mut powers = Vec::with_capacity(n_inner);
    for c in 0..k {
        powers.clear();
        powers.extend(x.column(c).iter().map(|&v| v.powi(order as i32)));
        out[c] = mix * pairwise_sum(&powers) / n_inner as f64;
    }
    Ok(out)
}

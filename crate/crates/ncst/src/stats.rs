//! Empirical summaries and distribution-comparison utilities: moment-based
//! skewness and kurtosis, interpolated percentiles, two-sample
//! Kolmogorov-Smirnov distance, Q-Q pairs, and kernel density grids.

use nalgebra::DMatrix;

use crate::config::{DEFAULT_GRID_POINTS, GRID_PCT_RANGE};
use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;

/// Skewness, excess kurtosis, and the 95th percentile of one sample margin.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub label: String,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub percentile_95: f64,
    pub n: usize,
}

/// Computes a [`SummaryRow`] for one margin.
pub fn summarize(label: &str, x: &[f64]) -> Result<SummaryRow> {
    Ok(SummaryRow {
        label: label.to_string(),
        skewness: sample_skewness(x)?,
        excess_kurtosis: excess_kurtosis(x)?,
        percentile_95: percentile(x, 0.95)?,
        n: x.len(),
    })
}

fn central_moments(x: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mean = pairwise_sum(x) / n;
    let mut d2 = Vec::with_capacity(x.len());
    let mut d3 = Vec::with_capacity(x.len());
    let mut d4 = Vec::with_capacity(x.len());
    for &v in x {
        let d = v - mean;
        let dd = d * d;
        d2.push(dd);
        d3.push(dd * d);
        d4.push(dd * dd);
    }
    (
        mean,
        pairwise_sum(&d2) / n,
        pairwise_sum(&d3) / n,
        pairwise_sum(&d4) / n,
    )
}

/// Moment-definition sample skewness `m3 / m2^{3/2}` (biased form, no
/// small-sample correction).
pub fn sample_skewness(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::InsufficientData {
            n: x.len(),
            needed: 2,
        });
    }
    let (_, m2, m3, _) = central_moments(x);
    if m2 <= 0.0 {
        return Err(Error::DegenerateSample("zero variance".into()));
    }
    Ok(m3 / m2.powf(1.5))
}

/// Moment-definition excess kurtosis `m4 / m2^2 - 3` (biased form).
pub fn excess_kurtosis(x: &[f64]) -> Result<f64> {
    if x.len() < 4 {
        return Err(Error::InsufficientData {
            n: x.len(),
            needed: 4,
        });
    }
    let (_, m2, _, m4) = central_moments(x);
    if m2 <= 0.0 {
        return Err(Error::DegenerateSample("zero variance".into()));
    }
    Ok(m4 / (m2 * m2) - 3.0)
}

fn percentile_of_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    // Linear interpolation at h = (n-1) q between order statistics.
    let h = (n as f64 - 1.0) * q;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

/// Interpolated sample quantile using the `h = (n-1) q` convention.
pub fn percentile(x: &[f64], q: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::InsufficientData { n: 0, needed: 1 });
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!(
            "percentile level must be in [0, 1], got {q}"
        )));
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample value"));
    Ok(percentile_of_sorted(&sorted, q))
}

/// Two-sample Kolmogorov-Smirnov statistic: the sup-norm distance between the
/// two empirical CDFs, handling ties by advancing both walks through every
/// repeated value before comparing.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InsufficientData {
            n: x.len().min(y.len()),
            needed: 1,
        });
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample value"));
    ys.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample value"));
    let (nx, ny) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] == v {
            i += 1;
        }
        while j < ys.len() && ys[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / nx - j as f64 / ny).abs());
    }
    // The remaining tail of one sample only narrows toward (1, 1).
    Ok(d.min(1.0))
}

/// Matched quantile pairs `(p, quantile of x, quantile of y)` for Q-Q plots.
/// Levels are capped at 0.999: beyond that the extreme order statistics of
/// heavy-tailed samples dominate and the pairs stop being informative.
pub fn qq_points(x: &[f64], y: &[f64], probs: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InsufficientData {
            n: x.len().min(y.len()),
            needed: 1,
        });
    }
    for &p in probs {
        if !(0.0..=0.999).contains(&p) {
            return Err(Error::Domain(format!(
                "Q-Q probability levels must lie in [0, 0.999], got {p}"
            )));
        }
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample value"));
    ys.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample value"));
    Ok(probs
        .iter()
        .map(|&p| {
            (
                p,
                percentile_of_sorted(&xs, p),
                percentile_of_sorted(&ys, p),
            )
        })
        .collect())
}

/// Grid specification for kernel density estimation: points per axis and the
/// percentile range of the data box the grid spans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points_per_axis: usize,
    pub lower_pct: f64,
    pub upper_pct: f64,
}

impl GridSpec {
    pub fn new(points_per_axis: usize, lower_pct: f64, upper_pct: f64) -> Result<Self> {
        if points_per_axis < 2 {
            return Err(Error::Domain(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        if !(0.0..=100.0).contains(&lower_pct)
            || !(0.0..=100.0).contains(&upper_pct)
            || lower_pct >= upper_pct
        {
            return Err(Error::Domain(format!(
                "percentile range must satisfy 0 <= lower < upper <= 100, got ({lower_pct}, {upper_pct})"
            )));
        }
        Ok(GridSpec {
            points_per_axis,
            lower_pct,
            upper_pct,
        })
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points_per_axis: DEFAULT_GRID_POINTS,
            lower_pct: GRID_PCT_RANGE.0,
            upper_pct: GRID_PCT_RANGE.1,
        }
    }
}

/// A kernel density estimate evaluated on a regular grid. For 2-D estimates
/// `density` is row-major over `(axis1, axis2)`; for 1-D, `axis2` is absent
/// and `density` runs along `axis1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub axis1: Vec<f64>,
    pub axis2: Option<Vec<f64>>,
    pub density: Vec<f64>,
    pub bandwidths: Vec<f64>,
}

impl DensityGrid {
    /// Trapezoidal integral of the density over the grid box.
    pub fn integral(&self) -> f64 {
        match &self.axis2 {
            None => trapezoid(&self.axis1, &self.density),
            Some(axis2) => {
                let n2 = axis2.len();
                let rows: Vec<f64> = self
                    .axis1
                    .iter()
                    .enumerate()
                    .map(|(i, _)| trapezoid(axis2, &self.density[i * n2..(i + 1) * n2]))
                    .collect();
                trapezoid(&self.axis1, &rows)
            }
        }
    }

    /// Grid coordinates of the largest density value `(axis1, axis2 or 0)`.
    pub fn mode(&self) -> (f64, f64) {
        let (mut best, mut arg) = (f64::NEG_INFINITY, 0);
        for (i, &d) in self.density.iter().enumerate() {
            if d > best {
                best = d;
                arg = i;
            }
        }
        match &self.axis2 {
            None => (self.axis1[arg], 0.0),
            Some(axis2) => (self.axis1[arg / axis2.len()], axis2[arg % axis2.len()]),
        }
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    }
    acc
}

struct Axis {
    grid: Vec<f64>,
    step: f64,
    bandwidth: f64,
}

fn build_axis(col: &[f64], spec: &GridSpec, dims: usize) -> Result<Axis> {
    let n = col.len() as f64;
    let mean = pairwise_sum(col) / n;
    let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    if var <= 0.0 {
        return Err(Error::DegenerateSample(
            "zero variance in a KDE axis".into(),
        ));
    }
    // Silverman's normal-reference bandwidth; the exponent depends on the
    // number of dimensions being estimated jointly.
    let exponent = if dims == 1 { -0.2 } else { -1.0 / 6.0 };
    let bandwidth = 1.06 * var.sqrt() * n.powf(exponent);
    let lo = percentile(col, spec.lower_pct / 100.0)?;
    let hi = percentile(col, spec.upper_pct / 100.0)?;
    if hi <= lo {
        return Err(Error::DegenerateSample(
            "KDE percentile box has zero width".into(),
        ));
    }
    let m = spec.points_per_axis;
    let step = (hi - lo) / (m as f64 - 1.0);
    let grid = (0..m).map(|i| lo + step * i as f64).collect();
    Ok(Axis {
        grid,
        step,
        bandwidth,
    })
}

/// Deposits each sample's unit mass onto its two bracketing grid cells in
/// proportion to proximity (linear binning); out-of-box samples pile onto the
/// edge cells so total binned mass stays `n`.
fn linear_bin(col: &[f64], axis: &Axis, weights: &mut [f64], positions: &mut Vec<(usize, f64)>) {
    positions.clear();
    let m = axis.grid.len();
    for &v in col {
        let t = ((v - axis.grid[0]) / axis.step).clamp(0.0, (m - 1) as f64);
        let lo = (t.floor() as usize).min(m - 2);
        let frac = t - lo as f64;
        positions.push((lo, frac));
        weights[lo] += 1.0 - frac;
        weights[lo + 1] += frac;
    }
}

/// Gaussian kernel taps at grid-step offsets, truncated at four bandwidths.
fn kernel_taps(axis: &Axis) -> Vec<f64> {
    let radius = ((4.0 * axis.bandwidth / axis.step).ceil() as usize).max(1);
    let norm = 1.0 / (axis.bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    (0..=radius)
        .map(|d| {
            let z = d as f64 * axis.step / axis.bandwidth;
            norm * (-0.5 * z * z).exp()
        })
        .collect()
}

/// Symmetric truncated-Gaussian convolution of `src` with the taps, written
/// strided into `dst`.
fn convolve(src: &[f64], taps: &[f64], dst: &mut [f64], stride: usize, len: usize) {
    for i in 0..len {
        let mut acc = src[i] * taps[0];
        for (d, &tap) in taps.iter().enumerate().skip(1) {
            if i >= d {
                acc += src[i - d] * tap;
            }
            if i + d < len {
                acc += src[i + d] * tap;
            }
        }
        dst[i * stride] = acc;
    }
}

/// Gaussian product-kernel density estimate on a regular grid covering the
/// data's percentile box. Accepts 1-D or 2-D samples (columns of `samples`).
///
/// The estimate is computed by linear binning followed by separable
/// convolution with the kernel, which is exact up to the binning resolution
/// and makes the cost independent of the sample count.
pub fn kde_grid(samples: &DMatrix<f64>, spec: &GridSpec) -> Result<DensityGrid> {
    let (n, k) = (samples.nrows(), samples.ncols());
    if !(1..=2).contains(&k) {
        return Err(Error::Domain(format!(
            "KDE supports 1 or 2 columns, got {k}"
        )));
    }
    if n < 30 {
        return Err(Error::InsufficientData { n, needed: 30 });
    }
    let cols: Vec<Vec<f64>> = (0..k)
        .map(|c| samples.column(c).iter().copied().collect())
        .collect();
    let axes: Vec<Axis> = cols
        .iter()
        .map(|col| build_axis(col, spec, k))
        .collect::<Result<_>>()?;

    if k == 1 {
        let m = axes[0].grid.len();
        let mut weights = vec![0.0; m];
        let mut scratch = Vec::new();
        linear_bin(&cols[0], &axes[0], &mut weights, &mut scratch);
        let taps = kernel_taps(&axes[0]);
        let mut density = vec![0.0; m];
        convolve(&weights, &taps, &mut density, 1, m);
        for d in density.iter_mut() {
            *d /= n as f64;
        }
        return Ok(DensityGrid {
            axis1: axes[0].grid.clone(),
            axis2: None,
            density,
            bandwidths: vec![axes[0].bandwidth],
        });
    }

    let (m1, m2) = (axes[0].grid.len(), axes[1].grid.len());
    // Joint linear binning: the product of the two per-axis weights.
    let mut weights = vec![0.0; m1 * m2];
    let mut pos1 = Vec::with_capacity(n);
    let mut pos2 = Vec::with_capacity(n);
    {
        let mut throwaway = vec![0.0; m1];
        linear_bin(&cols[0], &axes[0], &mut throwaway, &mut pos1);
        let mut throwaway = vec![0.0; m2];
        linear_bin(&cols[1], &axes[1], &mut throwaway, &mut pos2);
    }
    for (&(i, fi), &(j, fj)) in pos1.iter().zip(pos2.iter()) {
        weights[i * m2 + j] += (1.0 - fi) * (1.0 - fj);
        weights[i * m2 + j + 1] += (1.0 - fi) * fj;
        weights[(i + 1) * m2 + j] += fi * (1.0 - fj);
        weights[(i + 1) * m2 + j + 1] += fi * fj;
    }
    let taps1 = kernel_taps(&axes[0]);
    let taps2 = kernel_taps(&axes[1]);
    // Convolve along axis 2 within each row, then along axis 1 within each
    // column; the product kernel factorizes exactly.
    let mut half = vec![0.0; m1 * m2];
    for i in 0..m1 {
        convolve(
            &weights[i * m2..(i + 1) * m2],
            &taps2,
            &mut half[i * m2..(i + 1) * m2],
            1,
            m2,
        );
    }
    let mut density = vec![0.0; m1 * m2];
    let mut col_src = vec![0.0; m1];
    for j in 0..m2 {
        for i in 0..m1 {
            col_src[i] = half[i * m2 + j];
        }
        convolve(&col_src, &taps1, &mut density[j..], m2, m1);
    }
    for d in density.iter_mut() {
        *d /= n as f64;
    }
    Ok(DensityGrid {
        axis1: axes[0].grid.clone(),
        axis2: Some(axes[1].grid.clone()),
        density,
        bandwidths: vec![axes[0].bandwidth, axes[1].bandwidth],
    })
}

//! Test oracles shared by the integration suites: deterministic quadrature,
//! independently implemented reference densities and samplers, and
//! distribution-distance checks.
//!
//! Everything here is deliberately written from scratch (or on top of
//! `rand_distr` reference distributions) rather than calling into the main
//! crate, so that agreement between the two code paths is evidence and not
//! circularity. Accuracy targets are those of a test oracle: absolute errors
//! well below the tolerances the tests assert, not peak performance.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StudentT};
use std::f64::consts::PI;

/// Composite Simpson's rule for `f` over `[a, b]` with `panels` subintervals.
///
/// `panels` must be even and at least 2. Exact for cubics; error decays as
/// the fourth power of the step for smooth integrands.
///
/// # Panics
///
/// Panics when `panels` is odd or zero, or when the interval is not finite.
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(
        panels >= 2 && panels.is_multiple_of(2),
        "panels must be even and >= 2"
    );
    assert!(
        a.is_finite() && b.is_finite(),
        "integration limits must be finite"
    );
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// Tensor-product Simpson's rule over the rectangle `[ax, bx] x [ay, by]`.
///
/// Both panel counts must be even and at least 2.
pub fn simpson_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    panels_x: usize,
    panels_y: usize,
) -> f64 {
    assert!(
        panels_x >= 2 && panels_x.is_multiple_of(2) && panels_y >= 2 && panels_y.is_multiple_of(2),
        "panel counts must be even and >= 2"
    );
    let hx = (bx - ax) / panels_x as f64;
    let hy = (by - ay) / panels_y as f64;
    let weight = |i: usize, n: usize| -> f64 {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut sum = 0.0;
    for i in 0..=panels_x {
        let x = ax + hx * i as f64;
        let wx = weight(i, panels_x);
        let mut inner = 0.0;
        for j in 0..=panels_y {
            let y = ay + hy * j as f64;
            inner += weight(j, panels_y) * f(x, y);
        }
        sum += wx * inner;
    }
    sum * hx * hy / 9.0
}

/// A cumulative distribution function built by trapezoid integration of
/// density values tabulated on an increasing grid.
///
/// The cumulative mass is renormalized to end at exactly 1, so the grid
/// should cover essentially all of the distribution's mass; whatever the
/// grid misses becomes a uniform relative error in the cdf. Evaluation
/// interpolates linearly between grid nodes and clamps to 0 below the grid
/// and 1 above it.
#[derive(Debug, Clone)]
pub struct GridCdf {
    xs: Vec<f64>,
    cum: Vec<f64>,
}

impl GridCdf {
    /// Builds the cdf from density values `pdf[i]` at `xs[i]`.
    ///
    /// # Panics
    ///
    /// Panics when fewer than two nodes are given, when the grid is not
    /// strictly increasing, or when the integrated mass is not positive.
    pub fn from_density(xs: &[f64], pdf: &[f64]) -> Self {
        assert!(xs.len() >= 2, "need at least two grid nodes");
        assert_eq!(xs.len(), pdf.len(), "grid and density lengths differ");
        assert!(
            xs.windows(2).all(|w| w[0] < w[1]),
            "grid must be strictly increasing"
        );
        let mut cum = Vec::with_capacity(xs.len());
        cum.push(0.0);
        let mut total = 0.0;
        for i in 1..xs.len() {
            total += 0.5 * (pdf[i] + pdf[i - 1]) * (xs[i] - xs[i - 1]);
            cum.push(total);
        }
        assert!(
            total > 0.0 && total.is_finite(),
            "density mass must be positive"
        );
        for c in &mut cum {
            *c /= total;
        }
        GridCdf {
            xs: xs.to_vec(),
            cum,
        }
    }

    /// The interpolated cdf at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return 1.0;
        }
        let hi = self.xs.partition_point(|&node| node < x);
        let lo = hi - 1;
        let t = (x - self.xs[lo]) / (self.xs[hi] - self.xs[lo]);
        self.cum[lo] + t * (self.cum[hi] - self.cum[lo])
    }
}

/// One-sample Kolmogorov-Smirnov statistic: the largest gap between the
/// empirical distribution of `samples` and the reference cdf.
///
/// # Panics
///
/// Panics on an empty sample or non-finite values.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    assert!(!samples.is_empty(), "need at least one sample");
    let mut sorted = samples.to_vec();
    assert!(
        sorted.iter().all(|v| v.is_finite()),
        "samples must be finite"
    );
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x);
        let below = i as f64 / n;
        let above = (i + 1) as f64 / n;
        d = d.max((c - below).abs()).max((above - c).abs());
    }
    d
}

/// Least-squares slope of `ln y` against `ln x`.
///
/// Used to verify error-scaling laws such as Monte Carlo standard deviation
/// falling off as one over the square root of the sample count.
///
/// # Panics
///
/// Panics with fewer than two points or any non-positive coordinate.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "need at least two points");
    assert!(
        points.iter().all(|&(x, y)| x > 0.0 && y > 0.0),
        "coordinates must be positive"
    );
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

// Lanczos approximation with g = 7 and nine coefficients; relative error in
// the log is around 1e-13 over the positive axis, far below any tolerance
// the oracles assert.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // published coefficients, all digits kept
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for positive `x`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        // Reflection keeps the Lanczos sum on its accurate branch.
        PI.ln() - (PI * x).sin().ln() - ln_gamma(1.0 - x)
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
    }
}

/// Log-density of the standard Student t distribution with `nu` degrees of
/// freedom at `x`.
pub fn student_t_logpdf(x: f64, nu: f64) -> f64 {
    assert!(nu > 0.0, "degrees of freedom must be positive");
    ln_gamma((nu + 1.0) / 2.0)
        - ln_gamma(nu / 2.0)
        - 0.5 * (nu * PI).ln()
        - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p()
}

/// Log-density of the chi-squared distribution with `r` degrees of freedom
/// at `y > 0`.
pub fn chi_squared_logpdf(y: f64, r: f64) -> f64 {
    assert!(r > 0.0, "degrees of freedom must be positive");
    if y <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let half = r / 2.0;
    (half - 1.0) * y.ln() - y / 2.0 - half * std::f64::consts::LN_2 - ln_gamma(half)
}

/// Draws from the standard Student t distribution, deterministic in `seed`.
///
/// Backed by `rand_distr`'s implementation, so it shares no code with the
/// samplers under test.
pub fn student_t_draws(nu: f64, n: usize, seed: u64) -> Vec<f64> {
    let dist = StudentT::new(nu).expect("valid degrees of freedom");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n).map(|_| dist.sample(&mut rng)).collect()
}

//! Power-law fits on log-log scale with bootstrap intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

/// Bootstrap replicates per fit.
pub const RESAMPLES: usize = 1000;

/// How the per-size estimate is redrawn in a bootstrap replicate.
#[derive(Debug, Clone, PartialEq)]
pub enum Resample {
    /// A frequency of `successes` among `trials` indicators.
    Indicators { successes: u64, trials: u64 },
    /// The mean of these per-sample values.
    Values(Vec<f64>),
    /// A value without sampling error.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeEstimate {
    pub n: u32,
    pub estimate: Option<f64>,
    pub resample: Resample,
}

impl SizeEstimate {
    pub fn indicators(n: u32, successes: u64, trials: u64) -> Self {
        let estimate = (trials > 0).then(|| successes as f64 / trials as f64);
        SizeEstimate { n, estimate, resample: Resample::Indicators { successes, trials } }
    }

    pub fn values(n: u32, values: Vec<f64>) -> Self {
        let estimate = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
        SizeEstimate { n, estimate, resample: Resample::Values(values) }
    }

    pub fn fixed(n: u32, value: f64) -> Self {
        SizeEstimate { n, estimate: Some(value), resample: Resample::Fixed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Percentile interval of the bootstrap slopes, widened to contain `slope`.
    pub slope_ci: (f64, f64),
    /// Standard deviation of the bootstrap slopes.
    pub slope_se: f64,
    pub r_squared: f64,
    pub sizes: Vec<u32>,
    /// Sizes dropped because their estimate was absent or not positive.
    pub excluded: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitError {
    TooFewSizes,
}

impl std::fmt::Display for FitError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("a fit needs at least three sizes with positive estimates")
    }
}

impl std::error::Error for FitError {}

/// Least squares line through `(x, y)`: slope, intercept and r².
pub fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    (slope, intercept, r2)
}

fn redraw(point: &SizeEstimate, centre: f64, rng: &mut ChaCha8Rng) -> f64 {
    match &point.resample {
        Resample::Fixed => centre,
        Resample::Indicators { trials, .. } => {
            let k = Binomial::new(*trials, centre.clamp(0.0, 1.0)).expect("valid binomial").sample(rng);
            k as f64 / *trials as f64
        }
        Resample::Values(v) => (0..v.len()).map(|_| v[rng.random_range(0..v.len())]).sum::<f64>() / v.len() as f64,
    }
}

/// Fits `log(estimate) = intercept + slope * log(n)`. Replicates in which a
/// redrawn estimate is not positive are dropped.
pub fn fit_exponent(points: &[SizeEstimate], bootstrap_seed: u64) -> Result<FitResult, FitError> {
    let (used, excluded): (Vec<&SizeEstimate>, Vec<&SizeEstimate>) =
        points.iter().partition(|p| p.estimate.is_some_and(|e| e > 0.0));
    if used.len() < 3 {
        return Err(FitError::TooFewSizes);
    }
    let xs: Vec<f64> = used.iter().map(|p| (p.n as f64).ln()).collect();
    let centres: Vec<f64> = used.iter().map(|p| p.estimate.unwrap()).collect();
    let ys: Vec<f64> = centres.iter().map(|y| y.ln()).collect();
    let (slope, intercept, r_squared) = ols(&xs, &ys);

    let mut rng = ChaCha8Rng::seed_from_u64(bootstrap_seed);
    let mut slopes = Vec::with_capacity(RESAMPLES);
    for _ in 0..RESAMPLES {
        let drawn: Vec<f64> = used.iter().zip(&centres).map(|(p, c)| redraw(p, *c, &mut rng)).collect();
        if drawn.iter().all(|y| *y > 0.0) {
            let logs: Vec<f64> = drawn.iter().map(|y| y.ln()).collect();
            slopes.push(ols(&xs, &logs).0);
        }
    }
    let (slope_ci, slope_se) = if slopes.is_empty() {
        ((slope, slope), 0.0)
    } else {
        slopes.sort_by(f64::total_cmp);
        let at = |q: f64| slopes[((q * (slopes.len() - 1) as f64).round() as usize).min(slopes.len() - 1)];
        let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
        let var = slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / slopes.len() as f64;
        ((at(0.025).min(slope), at(0.975).max(slope)), var.sqrt())
    };
    Ok(FitResult {
        slope,
        intercept,
        slope_ci,
        slope_se,
        r_squared,
        sizes: used.iter().map(|p| p.n).collect(),
        excluded: excluded.iter().map(|p| p.n).collect(),
    })
}

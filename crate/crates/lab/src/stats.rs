//! Interval estimates for Monte Carlo frequencies and means.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    // Clamp so that rounding never pushes the bounds past the point estimate.
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

/// Standard error of a binomial proportion.
pub fn binomial_se(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::INFINITY;
    }
    let p = successes as f64 / trials as f64;
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Sample mean and standard error of the mean, summed in slice order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub count: usize,
    pub mean: f64,
    pub se: f64,
}

impl MeanEstimate {
    /// `None` for an empty slice.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Some(MeanEstimate { count: values.len(), mean, se: (var / n).sqrt() })
    }

    /// Normal-approximation 95% interval.
    pub fn interval(&self) -> (f64, f64) {
        (self.mean - Z95 * self.se, self.mean + Z95 * self.se)
    }
}

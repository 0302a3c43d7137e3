//! Monte Carlo estimates of arm-event probabilities.

use percolation_core::arms::{ArmPattern, ArmSpec};
use percolation_core::lattice::LazyConfiguration;
use serde::{Deserialize, Serialize};

use crate::record::EstimateRecord;
use crate::sampling::{count_hits, stream_seed};
use crate::stats::Z95;

/// Statistic label of an arm pattern.
pub fn statistic_name(pattern: ArmPattern) -> String {
    format!("pi_{}", pattern.name())
}

/// Number of samples in `0..samples` on which the event occurs. The stream
/// seed is used as given, so callers control independence.
pub fn arm_hits(spec: &ArmSpec, p: f64, samples: u64, stream: u64) -> anyhow::Result<u64> {
    let region = spec.region();
    // Surface domain errors once, before fanning out.
    spec.occurs(&LazyConfiguration::new(region, p, stream, 0)?)?;
    Ok(count_hits(samples, |id| {
        let field = LazyConfiguration::new(region, p, stream, id).expect("validated");
        spec.occurs(&field).expect("validated")
    }))
}

/// Frequency of the event over `samples` configurations of the smallest
/// enclosing box, with its Wilson interval.
pub fn arm_probability(spec: &ArmSpec, p: f64, samples: u64, master_seed: u64) -> anyhow::Result<EstimateRecord> {
    anyhow::ensure!(samples >= 1, "at least one sample is required");
    let stream = stream_seed(master_seed, spec.pattern().name(), spec.outer(), spec.inner());
    let hits = arm_hits(spec, p, samples, stream)?;
    let m = (spec.inner() > 0).then_some(spec.inner());
    Ok(EstimateRecord::frequency(&statistic_name(spec.pattern()), spec.outer(), m, hits, samples, master_seed))
}

/// Plug-in quasi-multiplicativity ratio with its three ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiRatio {
    pub m: u32,
    pub n: u32,
    pub ratio: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub whole: EstimateRecord,
    pub inner: EstimateRecord,
    pub ring: EstimateRecord,
}

impl QuasiRatio {
    pub fn to_record(&self, samples: u64, seed: u64) -> EstimateRecord {
        EstimateRecord {
            statistic: "quasimult_ratio".into(),
            n: self.n,
            m: Some(self.m),
            samples,
            estimate: self.ratio,
            ci_low: self.ci_low,
            ci_high: self.ci_high,
            seed,
        }
    }
}

/// `pi3(n) / (pi3(m) * pi3(m, n))` from three independent streams. The
/// interval comes from the delta method on the log scale. For `m == n` the
/// ring probability is one by convention and the ratio is exactly one.
pub fn quasimultiplicativity_check(m: u32, n: u32, p: f64, samples: u64, master_seed: u64) -> anyhow::Result<QuasiRatio> {
    anyhow::ensure!(1 <= m && m <= n, "radii must satisfy 1 <= m <= n");
    let whole = arm_probability(&ArmSpec::at(ArmPattern::ThreeArmEdge, n)?, p, samples, master_seed)?;
    let inner = arm_probability(&ArmSpec::at(ArmPattern::ThreeArmEdge, m)?, p, samples, master_seed)?;
    if m == n {
        let ring = EstimateRecord::exact(&statistic_name(ArmPattern::ThreeArmAnnulus), n, Some(m), 1.0, 0, master_seed);
        return Ok(QuasiRatio { m, n, ratio: Some(1.0), ci_low: Some(1.0), ci_high: Some(1.0), whole, inner, ring });
    }
    let ring = arm_probability(&ArmSpec::new(ArmPattern::ThreeArmAnnulus, m, n, 0)?, p, samples, master_seed)?;
    let (ratio, ci_low, ci_high) = combine_ratio(&whole, &inner, &ring);
    Ok(QuasiRatio { m, n, ratio, ci_low, ci_high, whole, inner, ring })
}

/// `a / (b * c)` for three frequencies, with a log-scale delta-method
/// interval. The interval is absent when any frequency is zero.
pub fn combine_ratio(
    whole: &EstimateRecord,
    inner: &EstimateRecord,
    ring: &EstimateRecord,
) -> (Option<f64>, Option<f64>, Option<f64>) {
    let parts = [whole, inner, ring].map(|r| r.estimate.map(|e| (e, r.samples)));
    let [Some((a, na)), Some((b, nb)), Some((c, nc))] = parts else {
        return (None, None, None);
    };
    if b <= 0.0 || c <= 0.0 {
        return (None, None, None);
    }
    let r = a / (b * c);
    if a <= 0.0 {
        return (Some(r), None, None);
    }
    // Exactly known factors (no samples) contribute no variance.
    let rel = |x: f64, k: u64| if k == 0 { 0.0 } else { (1.0 - x) / (x * k as f64) };
    let s = (rel(a, na) + rel(b, nb) + rel(c, nc)).sqrt();
    (Some(r), Some(r * (-Z95 * s).exp()), Some(r * (Z95 * s).exp()))
}

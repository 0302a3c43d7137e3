//! Experiment orchestration: per-size sampling, conditioning, estimates and fits.

use percolation_core::arms::{ArmPattern, ArmSpec};
use percolation_core::crossings::{circuit_exists, extremal_crossing, innermost_circuit, shortest_crossing, Extremal, LatticeCircuit};
use percolation_core::detours::{build_shortcut_circuit, find_all_detours, select_maximal_family, validate_detour_lemmas, Epsilon};
use percolation_core::lattice::{Configuration, EdgeField, LazyConfiguration, Region};
use serde::{Deserialize, Serialize};

use crate::fit::{fit_exponent, FitResult, SizeEstimate};
use crate::montecarlo::{arm_hits, combine_ratio, statistic_name};
use crate::record::EstimateRecord;
use crate::sampling::{first_hits, map_samples, stream_seed};
use crate::stats::MeanEstimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Ratio,
    MzScaling,
    FiveArmExponent,
    Dmin,
    LowerTail,
    Quasimult,
    DetourStats,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Ratio,
        ExperimentKind::MzScaling,
        ExperimentKind::FiveArmExponent,
        ExperimentKind::Dmin,
        ExperimentKind::LowerTail,
        ExperimentKind::Quasimult,
        ExperimentKind::DetourStats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Ratio => "ratio",
            ExperimentKind::MzScaling => "mz_scaling",
            ExperimentKind::FiveArmExponent => "five_arm_exponent",
            ExperimentKind::Dmin => "dmin",
            ExperimentKind::LowerTail => "lower_tail",
            ExperimentKind::Quasimult => "quasimult",
            ExperimentKind::DetourStats => "detour_stats",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Everything needed to reproduce one study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment: ExperimentKind,
    pub sizes: Vec<u32>,
    /// Configurations per size. For `detour_stats` this is the number of
    /// configurations that contain a circuit.
    pub samples_per_size: u64,
    pub p: f64,
    pub epsilon: Option<f64>,
    pub master_seed: u64,
    pub output_path: Option<String>,
    /// Samples of the three-arm pre-pass (defaults to `samples_per_size`).
    pub pi3_samples: Option<u64>,
    /// Cap on configurations inspected per size while looking for circuits.
    pub max_scan: Option<u64>,
}

impl ExperimentSpec {
    pub fn new(experiment: ExperimentKind, sizes: Vec<u32>, samples_per_size: u64, master_seed: u64) -> Self {
        ExperimentSpec {
            experiment,
            sizes,
            samples_per_size,
            p: 0.5,
            epsilon: None,
            master_seed,
            output_path: None,
            pi3_samples: None,
            max_scan: None,
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(!self.sizes.is_empty(), "at least one size is required");
        anyhow::ensure!(self.sizes.windows(2).all(|w| w[0] < w[1]), "sizes must be strictly increasing");
        anyhow::ensure!(self.sizes[0] >= 1, "sizes must be positive");
        anyhow::ensure!(self.samples_per_size >= 1, "samples_per_size must be positive");
        anyhow::ensure!((0.0..=1.0).contains(&self.p), "p must lie in [0, 1]");
        match self.experiment {
            ExperimentKind::LowerTail => {
                let e = self.epsilon.ok_or_else(|| anyhow::anyhow!("lower_tail needs epsilon"))?;
                anyhow::ensure!(e > 0.0 && e.is_finite(), "epsilon must be positive");
            }
            ExperimentKind::DetourStats => {
                let e = self.epsilon.ok_or_else(|| anyhow::anyhow!("detour_stats needs epsilon"))?;
                Epsilon::from_f64(e)?;
            }
            _ => {}
        }
        Ok(())
    }

    fn pi3_samples(&self) -> u64 {
        self.pi3_samples.unwrap_or(self.samples_per_size).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    pub statistic: String,
    pub fit: FitResult,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub records: Vec<EstimateRecord>,
    pub fits: Vec<NamedFit>,
    /// Validator failures, one line per failing sample.
    pub violations: Vec<String>,
}

impl ExperimentOutput {
    pub fn record(&self, statistic: &str, n: u32) -> Option<&EstimateRecord> {
        self.records.iter().find(|r| r.statistic == statistic && r.n == n)
    }

    pub fn fit(&self, statistic: &str) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.statistic == statistic).map(|f| &f.fit)
    }
}

/// Crossing lengths of one box configuration with a left-right crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingSample {
    pub lowest: u32,
    pub shortest: u32,
}

/// Lowest and shortest crossing lengths of `samples` configurations of the
/// box of size `n`; `None` where no crossing exists.
pub fn crossing_pass(n: u32, p: f64, samples: u64, master_seed: u64) -> anyhow::Result<Vec<Option<CrossingSample>>> {
    let region = Region::square(n)?;
    let stream = stream_seed(master_seed, "crossing", n, 0);
    Configuration::sample(region, p, stream, 0)?;
    Ok(map_samples(samples, |id| {
        let c = Configuration::sample(region, p, stream, id).expect("validated");
        let lowest = extremal_crossing(&c, Extremal::Lowest).expect("box region").path?;
        let shortest = shortest_crossing(&c).expect("box region").length();
        Some(CrossingSample { lowest: lowest.len() as u32, shortest: shortest as u32 })
    }))
}

/// Three-arm probability from a stream that no other statistic uses.
pub fn pi3_prepass(n: u32, p: f64, samples: u64, master_seed: u64) -> anyhow::Result<EstimateRecord> {
    let spec = ArmSpec::at(ArmPattern::ThreeArmEdge, n)?;
    let hits = arm_hits(&spec, p, samples, stream_seed(master_seed, "pi3_prepass", n, 0))?;
    Ok(EstimateRecord::frequency(&statistic_name(ArmPattern::ThreeArmEdge), n, None, hits, samples, master_seed))
}

fn bootstrap_seed(master_seed: u64, statistic: &str) -> u64 {
    stream_seed(master_seed, &format!("bootstrap/{statistic}"), 0, 0)
}

/// Conditioned crossing statistics at one size.
pub struct CrossingSummary {
    pub n: u32,
    pub samples: u64,
    pub lowest: Vec<f64>,
    pub shortest: Vec<f64>,
}

impl CrossingSummary {
    pub fn from_pass(n: u32, pass: &[Option<CrossingSample>]) -> Self {
        let hits: Vec<CrossingSample> = pass.iter().flatten().copied().collect();
        CrossingSummary {
            n,
            samples: pass.len() as u64,
            lowest: hits.iter().map(|s| s.lowest as f64).collect(),
            shortest: hits.iter().map(|s| s.shortest as f64).collect(),
        }
    }

    pub fn conditioned(&self) -> u64 {
        self.lowest.len() as u64
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.shortest.iter().zip(&self.lowest).map(|(s, l)| s / l).collect()
    }

    pub fn conditioning_record(&self, seed: u64) -> EstimateRecord {
        EstimateRecord::frequency("P_H", self.n, None, self.conditioned(), self.samples, seed)
    }
}

/// Records of the ratio study from per-size summaries.
pub fn ratio_records(summaries: &[CrossingSummary], seed: u64) -> Vec<EstimateRecord> {
    let mut out = Vec::new();
    for s in summaries {
        out.push(s.conditioning_record(seed));
        out.push(EstimateRecord::mean("S_over_L", s.n, None, &s.ratios(), seed));
    }
    out
}

/// Records and slope fits of the chemical-distance study.
pub fn dmin_outputs(summaries: &[CrossingSummary], seed: u64) -> (Vec<EstimateRecord>, Vec<NamedFit>) {
    let mut records = Vec::new();
    for s in summaries {
        records.push(s.conditioning_record(seed));
        records.push(EstimateRecord::mean("E_shortest_len", s.n, None, &s.shortest, seed));
        records.push(EstimateRecord::mean("E_lowest_len", s.n, None, &s.lowest, seed));
    }
    let mut fits = Vec::new();
    for (name, pick) in [("E_shortest_len", 0), ("E_lowest_len", 1)] {
        let points: Vec<SizeEstimate> = summaries
            .iter()
            .map(|s| SizeEstimate::values(s.n, if pick == 0 { s.shortest.clone() } else { s.lowest.clone() }))
            .collect();
        if let Ok(fit) = fit_exponent(&points, bootstrap_seed(seed, name)) {
            fits.push(NamedFit { statistic: name.into(), fit });
        }
    }
    (records, fits)
}

fn crossing_summaries(spec: &ExperimentSpec) -> anyhow::Result<Vec<CrossingSummary>> {
    spec.sizes
        .iter()
        .map(|&n| Ok(CrossingSummary::from_pass(n, &crossing_pass(n, spec.p, spec.samples_per_size, spec.master_seed)?)))
        .collect()
}

fn mz_scaling(spec: &ExperimentSpec) -> anyhow::Result<ExperimentOutput> {
    let seed = spec.master_seed;
    let mut out = ExperimentOutput::default();
    for s in crossing_summaries(spec)? {
        let pi3 = pi3_prepass(s.n, spec.p, spec.pi3_samples(), seed)?;
        let mean = EstimateRecord::mean("E_lowest_len", s.n, None, &s.lowest, seed);
        let scale = (s.n as f64).powi(2);
        let mut ratio = EstimateRecord { statistic: "mz_ratio".into(), ..mean.clone() };
        match (MeanEstimate::of(&s.lowest), pi3.estimate) {
            (Some(m), Some(pi)) if pi > 0.0 && m.mean > 0.0 => {
                let r = m.mean / (scale * pi);
                let rel_pi = crate::stats::binomial_se((pi * pi3.samples as f64).round() as u64, pi3.samples) / pi;
                let rel = ((m.se / m.mean).powi(2) + rel_pi.powi(2)).sqrt();
                let z = crate::stats::Z95;
                ratio.estimate = Some(r);
                ratio.ci_low = Some(r * (-z * rel).exp());
                ratio.ci_high = Some(r * (z * rel).exp());
            }
            _ => {
                ratio.estimate = None;
                ratio.ci_low = None;
                ratio.ci_high = None;
            }
        }
        out.records.extend([s.conditioning_record(seed), pi3, mean, ratio]);
    }
    Ok(out)
}

fn lower_tail(spec: &ExperimentSpec) -> anyhow::Result<ExperimentOutput> {
    let seed = spec.master_seed;
    let eps = spec.epsilon.expect("validated");
    let mut out = ExperimentOutput::default();
    for s in crossing_summaries(spec)? {
        let pi3 = pi3_prepass(s.n, spec.p, spec.pi3_samples(), seed)?;
        let mut records = vec![s.conditioning_record(seed), pi3.clone()];
        match pi3.estimate {
            Some(pi) => {
                let threshold = eps * (s.n as f64).powi(2) * pi;
                records.push(EstimateRecord::exact("lower_tail_threshold", s.n, None, threshold, pi3.samples, seed));
                // Conditioned lengths are positive, so only the upper bound matters.
                let below = s.lowest.iter().filter(|&&l| l < threshold).count() as u64;
                records.push(EstimateRecord::frequency("lower_tail", s.n, None, below, s.conditioned(), seed));
            }
            None => records.push(EstimateRecord::frequency("lower_tail", s.n, None, 0, 0, seed)),
        }
        // Same event with the threshold scaled by the conditioned mean length.
        let below_mean = match MeanEstimate::of(&s.lowest) {
            Some(m) => s.lowest.iter().filter(|&&l| l < eps * m.mean).count() as u64,
            None => 0,
        };
        records.push(EstimateRecord::frequency("lower_tail_vs_mean", s.n, None, below_mean, s.conditioned(), seed));
        out.records.extend(records);
    }
    Ok(out)
}

fn five_arm_exponent(spec: &ExperimentSpec) -> anyhow::Result<ExperimentOutput> {
    let seed = spec.master_seed;
    let name = statistic_name(ArmPattern::FiveArmPoint);
    let mut out = ExperimentOutput::default();
    let mut points = Vec::new();
    for &n in &spec.sizes {
        let arm = ArmSpec::at(ArmPattern::FiveArmPoint, n)?;
        let hits = arm_hits(&arm, spec.p, spec.samples_per_size, stream_seed(seed, &name, n, 0))?;
        out.records.push(EstimateRecord::frequency(&name, n, None, hits, spec.samples_per_size, seed));
        points.push(SizeEstimate::indicators(n, hits, spec.samples_per_size));
    }
    if let Ok(fit) = fit_exponent(&points, bootstrap_seed(seed, &name)) {
        out.fits.push(NamedFit { statistic: name, fit });
    }
    Ok(out)
}

fn quasimult(spec: &ExperimentSpec) -> anyhow::Result<ExperimentOutput> {
    let seed = spec.master_seed;
    let samples = spec.samples_per_size;
    let edge_name = statistic_name(ArmPattern::ThreeArmEdge);
    let ring_name = statistic_name(ArmPattern::ThreeArmAnnulus);
    let mut out = ExperimentOutput::default();
    let mut singles = Vec::new();
    for &n in &spec.sizes {
        let hits = arm_hits(&ArmSpec::at(ArmPattern::ThreeArmEdge, n)?, spec.p, samples, stream_seed(seed, &edge_name, n, 0))?;
        let rec = EstimateRecord::frequency(&edge_name, n, None, hits, samples, seed);
        out.records.push(rec.clone());
        singles.push(rec);
    }
    let mut pairs: Vec<(usize, usize)> =
        (0..singles.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    if spec.sizes.len() == 1 {
        pairs.push((0, 0));
    }
    for (i, j) in pairs {
        let (m, n) = (spec.sizes[i], spec.sizes[j]);
        let ring = if m == n {
            EstimateRecord::exact(&ring_name, n, Some(m), 1.0, 0, seed)
        } else {
            let arm = ArmSpec::new(ArmPattern::ThreeArmAnnulus, m, n, 0)?;
            let hits = arm_hits(&arm, spec.p, samples, stream_seed(seed, &ring_name, n, m))?;
            EstimateRecord::frequency(&ring_name, n, Some(m), hits, samples, seed)
        };
        let (ratio, ci_low, ci_high) = if m == n {
            (Some(1.0), Some(1.0), Some(1.0))
        } else {
            combine_ratio(&singles[j], &singles[i], &ring)
        };
        out.records.push(ring);
        out.records.push(EstimateRecord {
            statistic: "quasimult_ratio".into(),
            n,
            m: Some(m),
            samples,
            estimate: ratio,
            ci_low,
            ci_high,
            seed,
        });
    }
    Ok(out)
}

/// Outcome of the detour pipeline on one configuration with a circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetourOutcome {
    pub sample_id: u64,
    pub circuit_len: usize,
    pub shortcut_len: usize,
    /// Circuit edges that admit a detour.
    pub edges_with_detour: usize,
    pub family_size: usize,
    pub family_detour_length: usize,
    pub failures: Vec<String>,
}

/// Independent restatement of the shortcut-circuit requirements.
fn shortcut_problems<F: EdgeField + ?Sized>(
    field: &F,
    gamma: &LatticeCircuit,
    sigma: &LatticeCircuit,
    detour_length: usize,
    eps: Epsilon,
) -> Vec<String> {
    let mut problems = Vec::new();
    let region = field.region();
    if !sigma.is_open_in(field) {
        problems.push("shortcut uses a closed edge".to_string());
    }
    let distinct: std::collections::BTreeSet<_> = sigma.cycle().iter().collect();
    if distinct.len() != sigma.cycle().len() {
        problems.push("shortcut is not self-avoiding".to_string());
    }
    if !sigma.cycle().iter().all(|v| region.contains(*v)) {
        problems.push("shortcut leaves the annulus".to_string());
    }
    if !matches!(sigma.winding_about_origin(), Some(1) | Some(-1)) {
        problems.push("shortcut does not wind once around the origin".to_string());
    }
    if sigma.len() > gamma.len() {
        problems.push("shortcut is longer than the circuit".to_string());
    }
    if !eps.allows(detour_length, gamma.len()) {
        problems.push("family exceeds its length budget".to_string());
    }
    problems
}

/// Detours, greedy family, shortcut circuit and validators for one circuit.
pub fn detour_outcome<F: EdgeField + ?Sized>(
    field: &F,
    gamma: &LatticeCircuit,
    eps: Epsilon,
    sample_id: u64,
) -> anyhow::Result<DetourOutcome> {
    let detours = find_all_detours(field, gamma, eps)?;
    let family = select_maximal_family(&detours);
    let sigma = build_shortcut_circuit(gamma, &family)?;
    let report = validate_detour_lemmas(field, gamma, &detours, &sigma);
    let mut failures: Vec<String> = report.failures.iter().map(|f| format!("{f:?}")).collect();
    failures.extend(shortcut_problems(field, gamma, &sigma, family.total_detour_length, eps));
    Ok(DetourOutcome {
        sample_id,
        circuit_len: gamma.len(),
        shortcut_len: sigma.len(),
        edges_with_detour: detours.len(),
        family_size: family.members.len(),
        family_detour_length: family.total_detour_length,
        failures,
    })
}

/// Ids of the first `wanted` configurations of annulus `n` (in the detour
/// stream) that contain an open circuit, and the number inspected.
pub fn circuit_ids(n: u32, p: f64, wanted: u64, max_scan: u64, master_seed: u64) -> anyhow::Result<(Vec<u64>, u64)> {
    let region = Region::annulus(n)?;
    let stream = stream_seed(master_seed, "detour", n, 0);
    LazyConfiguration::new(region, p, stream, 0)?;
    let (hits, scanned) = first_hits(wanted as usize, max_scan, |id| {
        let lazy = LazyConfiguration::new(region, p, stream, id).expect("validated");
        circuit_exists(&lazy).expect("annulus region").then_some(())
    });
    Ok((hits.into_iter().map(|h| h.0).collect(), scanned))
}

/// Detour outcomes on the given configurations of the detour stream.
pub fn detour_outcomes(n: u32, p: f64, eps: Epsilon, ids: &[u64], master_seed: u64) -> anyhow::Result<Vec<DetourOutcome>> {
    let region = Region::annulus(n)?;
    let stream = stream_seed(master_seed, "detour", n, 0);
    Configuration::sample(region, p, stream, 0)?;
    map_samples(ids.len() as u64, |k| {
        let id = ids[k as usize];
        let c = Configuration::sample(region, p, stream, id).expect("validated");
        let gamma = innermost_circuit(&c)?.circuit.ok_or_else(|| anyhow::anyhow!("sample {id} has no circuit"))?;
        detour_outcome(&c, &gamma, eps, id)
    })
    .into_iter()
    .collect()
}

/// Detour outcomes on the first `wanted` configurations with a circuit,
/// and the number of configurations inspected.
pub fn detour_pass(
    n: u32,
    p: f64,
    eps: Epsilon,
    wanted: u64,
    max_scan: u64,
    master_seed: u64,
) -> anyhow::Result<(Vec<DetourOutcome>, u64)> {
    let (ids, scanned) = circuit_ids(n, p, wanted, max_scan, master_seed)?;
    Ok((detour_outcomes(n, p, eps, &ids, master_seed)?, scanned))
}

/// Per-size records of the detour study.
pub fn detour_records(n: u32, eps: Epsilon, outcomes: &[DetourOutcome], scanned: u64, seed: u64) -> (Vec<EstimateRecord>, Vec<String>) {
    let col = |f: &dyn Fn(&DetourOutcome) -> f64| outcomes.iter().map(f).collect::<Vec<f64>>();
    let failing: Vec<&DetourOutcome> = outcomes.iter().filter(|o| !o.failures.is_empty()).collect();
    let violations = failing
        .iter()
        .map(|o| format!("n={n} epsilon={eps} sample={}: {}", o.sample_id, o.failures.join("; ")))
        .collect();
    let k = outcomes.len() as u64;
    let records = vec![
        EstimateRecord::frequency("P_circuit", n, None, k, scanned, seed),
        EstimateRecord::mean("E_innermost_len", n, None, &col(&|o| o.circuit_len as f64), seed),
        EstimateRecord::mean("E_shortcut_len", n, None, &col(&|o| o.shortcut_len as f64), seed),
        EstimateRecord::mean("detour_edge_fraction", n, None, &col(&|o| o.edges_with_detour as f64 / o.circuit_len as f64), seed),
        EstimateRecord::mean("family_size", n, None, &col(&|o| o.family_size as f64), seed),
        EstimateRecord::mean("family_budget_ratio", n, None, &col(&|o| o.family_detour_length as f64 / o.circuit_len as f64), seed),
        EstimateRecord::exact("validator_failures", n, None, failing.len() as f64, k, seed),
    ];
    (records, violations)
}

fn detour_stats(spec: &ExperimentSpec) -> anyhow::Result<ExperimentOutput> {
    let seed = spec.master_seed;
    let eps = Epsilon::from_f64(spec.epsilon.expect("validated"))?;
    let max_scan = spec.max_scan.unwrap_or(spec.samples_per_size.saturating_mul(20_000));
    let mut out = ExperimentOutput::default();
    for &n in &spec.sizes {
        let (outcomes, scanned) = detour_pass(n, spec.p, eps, spec.samples_per_size, max_scan, seed)?;
        let (records, violations) = detour_records(n, eps, &outcomes, scanned, seed);
        out.records.extend(records);
        out.violations.extend(violations);
    }
    Ok(out)
}

/// Runs one experiment on the current thread pool.
pub fn run_experiment(spec: &ExperimentSpec) -> anyhow::Result<ExperimentOutput> {
    spec.validate()?;
    match spec.experiment {
        ExperimentKind::Ratio => {
            Ok(ExperimentOutput { records: ratio_records(&crossing_summaries(spec)?, spec.master_seed), ..Default::default() })
        }
        ExperimentKind::Dmin => {
            let (records, fits) = dmin_outputs(&crossing_summaries(spec)?, spec.master_seed);
            Ok(ExperimentOutput { records, fits, ..Default::default() })
        }
        ExperimentKind::MzScaling => mz_scaling(spec),
        ExperimentKind::LowerTail => lower_tail(spec),
        ExperimentKind::FiveArmExponent => five_arm_exponent(spec),
        ExperimentKind::Quasimult => quasimult(spec),
        ExperimentKind::DetourStats => detour_stats(spec),
    }
}

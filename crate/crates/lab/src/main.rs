use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use percolation_core::arms::{ArmPattern, ArmSpec};
use percolation_core::crossings::{
    extremal_crossing, innermost_circuit, max_disjoint_crossings, shortest_crossing, shortest_enclosing_circuit,
    Extremal,
};
use percolation_core::detours::{find_all_detours, Epsilon};
use percolation_core::lattice::{Configuration, EdgeField, Region, RegionKind};
use percolation_lab::detour_rows::DetourRow;
use percolation_lab::experiment::{crossing_pass, detour_outcome, detour_pass, ratio_records, CrossingSummary};
use percolation_lab::oracle::{enumerate_oracle, parse_rational, OracleStatistic};
use percolation_lab::record::{write_json_lines, write_records, EstimateRecord, Format};
use percolation_lab::sampling::{map_samples, stream_seed, with_threads};
use percolation_lab::{montecarlo, records_csv, run_config, snapshot};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "perc", version, about = "Critical bond percolation experiments on the square lattice")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Encoding of estimate rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Sampling {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Write a snapshot of one sampled configuration.
    Sample {
        #[command(flatten)]
        s: Sampling,
        #[arg(long, value_parser = ["box", "annulus"], default_value = "box")]
        kind: String,
        #[arg(long, default_value_t = 0)]
        id: u64,
    },
    /// Crossing lengths of a snapshot, or their Monte Carlo estimates.
    Crossing {
        #[command(flatten)]
        s: Sampling,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Analyse this snapshot instead of sampling.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Innermost and shortest circuits of a snapshot, or their estimates.
    Circuit {
        #[command(flatten)]
        s: Sampling,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Monte Carlo probability of an arm event.
    Arms {
        #[command(flatten)]
        s: Sampling,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// One of a3_edge, a3_annulus, a5_point, a3_halfplane, a6_annulus, a1_point.
        #[arg(long, default_value = "a3_edge")]
        pattern: String,
        /// Inner radius of ring events.
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        defects: u32,
    },
    /// Shielded detours of the innermost circuit, one JSON line each.
    Detour {
        #[command(flatten)]
        s: Sampling,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Sample id to use; by default the first one with a circuit.
        #[arg(long)]
        id: Option<u64>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run every experiment of a `key = value` config file.
    Experiment {
        config: PathBuf,
        /// Also write fitted slopes as JSON lines to this file.
        #[arg(long)]
        fits: Option<PathBuf>,
    },
    /// Exact expectation by exhaustive enumeration.
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = ["box", "annulus"], default_value = "box")]
        kind: String,
        #[arg(long, value_enum)]
        statistic: OracleStatistic,
        /// Exact probability such as 1/2 or 0.25.
        #[arg(long, default_value = "1/2")]
        p: String,
    },
}

/// Failure categories mapped to exit codes.
enum Failure {
    Domain(anyhow::Error),
    Validator(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<percolation_core::Error> for Failure {
    fn from(e: percolation_core::Error) -> Self {
        Failure::Domain(e.into())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.into())
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn region_of(kind: &str, n: u32) -> anyhow::Result<Region> {
    let kind = snapshot::kind_from_name(kind).context("unknown region kind")?;
    Ok(Region::new(kind, n)?)
}

fn load(path: &Path) -> anyhow::Result<Configuration> {
    snapshot::read_snapshot(File::open(path).with_context(|| format!("cannot open {}", path.display()))?)
}

fn emit_json<T: Serialize>(out: Option<&Path>, row: &T) -> anyhow::Result<()> {
    write_json_lines(open_output(out)?, std::slice::from_ref(row))
}

#[derive(Serialize)]
struct CrossingReport {
    n: u32,
    crossing: bool,
    lowest_len: Option<usize>,
    shortest_len: Option<usize>,
    max_disjoint_crossings: usize,
}

#[derive(Serialize)]
struct CircuitReport {
    n: u32,
    circuit: bool,
    innermost_len: Option<usize>,
    shortest_len: Option<usize>,
}

fn crossing(cli: &Cli, s: &Sampling, samples: u64, input: Option<&Path>) -> Result<(), Failure> {
    if let Some(path) = input {
        let c = load(path)?;
        let low = extremal_crossing(&c, Extremal::Lowest)?;
        let short = shortest_crossing(&c)?;
        let report = CrossingReport {
            n: c.region().n(),
            crossing: low.exists(),
            lowest_len: low.exists().then(|| low.length()),
            shortest_len: short.exists().then(|| short.length()),
            max_disjoint_crossings: max_disjoint_crossings(&c)?,
        };
        return Ok(emit_json(cli.out.as_deref(), &report)?);
    }
    let pass = with_threads(cli.threads, || crossing_pass(s.n, s.p, samples, s.seed))??;
    let summary = CrossingSummary::from_pass(s.n, &pass);
    let mut rows = ratio_records(std::slice::from_ref(&summary), s.seed);
    rows.push(EstimateRecord::mean("E_lowest_len", s.n, None, &summary.lowest, s.seed));
    rows.push(EstimateRecord::mean("E_shortest_len", s.n, None, &summary.shortest, s.seed));
    Ok(write_records(open_output(cli.out.as_deref())?, &rows, cli.format)?)
}

fn circuit(cli: &Cli, s: &Sampling, samples: u64, input: Option<&Path>) -> Result<(), Failure> {
    if let Some(path) = input {
        let c = load(path)?;
        let inner = innermost_circuit(&c)?;
        let short = shortest_enclosing_circuit(&c)?;
        let report = CircuitReport {
            n: c.region().n(),
            circuit: inner.exists(),
            innermost_len: inner.exists().then(|| inner.length()),
            shortest_len: short.exists().then(|| short.length()),
        };
        return Ok(emit_json(cli.out.as_deref(), &report)?);
    }
    let region = Region::annulus(s.n)?;
    Configuration::sample(region, s.p, 0, 0)?;
    let stream = stream_seed(s.seed, "circuit", s.n, 0);
    let lengths = with_threads(cli.threads, || {
        map_samples(samples, |id| {
            let c = Configuration::sample(region, s.p, stream, id).expect("validated");
            let inner = innermost_circuit(&c).expect("annulus").circuit?;
            let short = shortest_enclosing_circuit(&c).expect("annulus").length();
            Some((inner.len() as f64, short as f64))
        })
    })?;
    let found: Vec<(f64, f64)> = lengths.iter().flatten().copied().collect();
    let inner: Vec<f64> = found.iter().map(|x| x.0).collect();
    let short: Vec<f64> = found.iter().map(|x| x.1).collect();
    let rows = vec![
        EstimateRecord::frequency("P_circuit", s.n, None, found.len() as u64, samples, s.seed),
        EstimateRecord::mean("E_innermost_len", s.n, None, &inner, s.seed),
        EstimateRecord::mean("E_shortest_circuit_len", s.n, None, &short, s.seed),
    ];
    Ok(write_records(open_output(cli.out.as_deref())?, &rows, cli.format)?)
}

fn arms(cli: &Cli, s: &Sampling, samples: u64, pattern: &str, m: u32, defects: u32) -> Result<(), Failure> {
    let pattern = ArmPattern::from_name(pattern).with_context(|| format!("unknown arm pattern {pattern}"))?;
    let spec = ArmSpec::new(pattern, m, s.n, defects)?;
    let rec = with_threads(cli.threads, || montecarlo::arm_probability(&spec, s.p, samples, s.seed))??;
    Ok(write_records(open_output(cli.out.as_deref())?, &[rec], cli.format)?)
}

fn detour(cli: &Cli, s: &Sampling, epsilon: f64, id: Option<u64>, input: Option<&Path>) -> Result<(), Failure> {
    let eps = Epsilon::from_f64(epsilon)?;
    let region = Region::annulus(s.n)?;
    let config = match (input, id) {
        (Some(path), _) => load(path)?,
        (None, Some(id)) => Configuration::sample(region, s.p, stream_seed(s.seed, "detour", s.n, 0), id)?,
        (None, None) => {
            let (found, scanned) = with_threads(cli.threads, || detour_pass(s.n, s.p, eps, 1, 10_000_000, s.seed))??;
            let first = found.first().ok_or_else(|| anyhow::anyhow!("no circuit among {scanned} samples"))?;
            Configuration::sample(region, s.p, stream_seed(s.seed, "detour", s.n, 0), first.sample_id)?
        }
    };
    if config.region().kind() != RegionKind::Annulus {
        return Err(Failure::Domain(percolation_core::Error::WrongRegionKind.into()));
    }
    let gamma = innermost_circuit(&config)?.circuit.context("configuration has no open circuit")?;
    let detours = find_all_detours(&config, &gamma, eps)?;
    let rows: Vec<DetourRow> = detours.iter().map(DetourRow::of).collect();
    write_json_lines(open_output(cli.out.as_deref())?, &rows)?;
    let outcome = detour_outcome(&config, &gamma, eps, config.provenance().map_or(0, |p| p.sample_id))?;
    eprintln!(
        "circuit {} edges, {} with detours, family of {}, shortcut {} edges",
        outcome.circuit_len, outcome.edges_with_detour, outcome.family_size, outcome.shortcut_len
    );
    if !outcome.failures.is_empty() {
        return Err(Failure::Validator(outcome.failures.join("; ")));
    }
    Ok(())
}

fn experiment(cli: &Cli, config: &Path, fits: Option<&Path>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config).with_context(|| format!("cannot read {}", config.display()))?;
    let results = run_config(&text, cli.threads)?;
    for (spec, out) in &results {
        if let Some(path) = &spec.output_path {
            write_records(open_output(Some(Path::new(path)))?, &out.records, cli.format)?;
        }
    }
    match cli.format {
        Format::Csv => open_output(cli.out.as_deref())?.write_all(&records_csv(&results)?)?,
        Format::Json => {
            let rows: Vec<EstimateRecord> = results.iter().flat_map(|(_, o)| o.records.iter().cloned()).collect();
            write_json_lines(open_output(cli.out.as_deref())?, &rows)?
        }
    }
    let all_fits: Vec<_> = results.iter().flat_map(|(_, o)| o.fits.iter().cloned()).collect();
    for f in &all_fits {
        eprintln!("fit {}: slope {:.4} in [{:.4}, {:.4}], r2 {:.4}", f.statistic, f.fit.slope, f.fit.slope_ci.0, f.fit.slope_ci.1, f.fit.r_squared);
    }
    if let Some(path) = fits {
        write_json_lines(open_output(Some(path))?, &all_fits)?;
    }
    let violations: Vec<&String> = results.iter().flat_map(|(_, o)| &o.violations).collect();
    if !violations.is_empty() {
        return Err(Failure::Validator(format!("{} validator failures, first: {}", violations.len(), violations[0])));
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    statistic: &'static str,
    kind: String,
    n: u32,
    p: String,
    value: String,
    approx: f64,
}

fn oracle(cli: &Cli, n: u32, kind: &str, statistic: OracleStatistic, p: &str) -> Result<(), Failure> {
    let region = region_of(kind, n)?;
    let prob = parse_rational(p).with_context(|| format!("cannot parse probability {p}"))?;
    let value = enumerate_oracle(region, statistic, &prob)?;
    let approx = num_traits::ToPrimitive::to_f64(&value).unwrap_or(f64::NAN);
    let report = OracleReport { statistic: statistic.name(), kind: kind.into(), n, p: prob.to_string(), value: value.to_string(), approx };
    Ok(emit_json(cli.out.as_deref(), &report)?)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Sample { s, kind, id } => {
            let c = Configuration::sample(region_of(kind, s.n)?, s.p, s.seed, *id)?;
            let mut out = open_output(cli.out.as_deref())?;
            snapshot::write_snapshot(&mut out, &c)?;
            Ok(())
        }
        Command::Crossing { s, samples, input } => crossing(cli, s, *samples, input.as_deref()),
        Command::Circuit { s, samples, input } => circuit(cli, s, *samples, input.as_deref()),
        Command::Arms { s, samples, pattern, m, defects } => arms(cli, s, *samples, pattern, *m, *defects),
        Command::Detour { s, epsilon, id, input } => detour(cli, s, *epsilon, *id, input.as_deref()),
        Command::Experiment { config, fits } => experiment(cli, config, fits.as_deref()),
        Command::Oracle { n, kind, statistic, p } => oracle(cli, *n, kind, *statistic, p),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Validator(msg)) => {
            eprintln!("validator failure: {msg}");
            ExitCode::from(3)
        }
    }
}

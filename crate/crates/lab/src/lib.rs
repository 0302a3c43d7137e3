//! Experiments, estimators, exact oracles and file formats built on
//! `percolation-core`. The `perc` binary exposes all of it on the command line.

pub mod config;
pub mod detour_rows;
pub mod experiment;
pub mod fit;
pub mod montecarlo;
pub mod oracle;
pub mod record;
pub mod sampling;
pub mod snapshot;
pub mod stats;

use experiment::{run_experiment, ExperimentOutput, ExperimentSpec};

/// Runs every experiment of a config file on a pool of `threads` workers.
pub fn run_config(text: &str, threads: Option<usize>) -> anyhow::Result<Vec<(ExperimentSpec, ExperimentOutput)>> {
    let specs = config::parse_experiments(text)?;
    sampling::with_threads(threads, || {
        specs
            .into_iter()
            .map(|s| {
                let out = run_experiment(&s)?;
                Ok((s, out))
            })
            .collect()
    })?
}

/// CSV of all records of a run, in experiment order.
pub fn records_csv(results: &[(ExperimentSpec, ExperimentOutput)]) -> anyhow::Result<Vec<u8>> {
    let rows: Vec<record::EstimateRecord> = results.iter().flat_map(|(_, o)| o.records.iter().cloned()).collect();
    let mut buf = Vec::new();
    record::write_csv(&mut buf, &rows)?;
    Ok(buf)
}

//! Estimate rows and their CSV and JSON-lines encodings.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::stats::{wilson, MeanEstimate};

/// Column order of every CSV this crate writes.
pub const CSV_HEADER: &str = "statistic,n,m,samples,estimate,ci_low,ci_high,seed";

/// One per-size estimate. `estimate` and the interval are absent when no
/// sample satisfied the conditioning event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub statistic: String,
    pub n: u32,
    pub m: Option<u32>,
    pub samples: u64,
    pub estimate: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub seed: u64,
}

impl EstimateRecord {
    /// Frequency `successes / trials` with its Wilson interval.
    pub fn frequency(statistic: &str, n: u32, m: Option<u32>, successes: u64, trials: u64, seed: u64) -> Self {
        let (estimate, ci) = if trials == 0 {
            (None, None)
        } else {
            (Some(successes as f64 / trials as f64), Some(wilson(successes, trials)))
        };
        EstimateRecord {
            statistic: statistic.to_string(),
            n,
            m,
            samples: trials,
            estimate,
            ci_low: ci.map(|c| c.0),
            ci_high: ci.map(|c| c.1),
            seed,
        }
    }

    /// Sample mean with a normal interval; absent for an empty sample.
    pub fn mean(statistic: &str, n: u32, m: Option<u32>, values: &[f64], seed: u64) -> Self {
        let est = MeanEstimate::of(values);
        EstimateRecord {
            statistic: statistic.to_string(),
            n,
            m,
            samples: values.len() as u64,
            estimate: est.map(|e| e.mean),
            ci_low: est.map(|e| e.interval().0),
            ci_high: est.map(|e| e.interval().1),
            seed,
        }
    }

    /// A value known without sampling error.
    pub fn exact(statistic: &str, n: u32, m: Option<u32>, value: f64, samples: u64, seed: u64) -> Self {
        EstimateRecord {
            statistic: statistic.to_string(),
            n,
            m,
            samples,
            estimate: Some(value),
            ci_low: Some(value),
            ci_high: Some(value),
            seed,
        }
    }

    /// Half-width of the interval divided by the normal quantile.
    pub fn standard_error(&self) -> Option<f64> {
        Some((self.ci_high? - self.ci_low?) / (2.0 * crate::stats::Z95))
    }
}

pub fn write_csv<W: Write>(out: W, records: &[EstimateRecord]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> anyhow::Result<Vec<EstimateRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    anyhow::ensure!(header.join(",") == CSV_HEADER, "unexpected CSV header: {}", header.join(","));
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn write_json_lines<W: Write, T: Serialize>(mut out: W, rows: &[T]) -> anyhow::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_json_lines<R: Read, T: for<'de> Deserialize<'de>>(input: R) -> anyhow::Result<Vec<T>> {
    let text = std::io::read_to_string(input)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

/// Output encodings selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn write_records<W: Write>(out: W, records: &[EstimateRecord], format: Format) -> anyhow::Result<()> {
    match format {
        Format::Csv => write_csv(out, records),
        Format::Json => write_json_lines(out, records),
    }
}

//! `key = value` experiment files.
//!
//! Blank lines and lines starting with `#` are ignored. A line `[name]`
//! opens a new experiment; keys that appear before the first such line are
//! defaults inherited by every experiment in the file. A file without any
//! section header describes a single experiment.

use std::collections::BTreeMap;

use anyhow::{bail, Context};

use crate::experiment::{ExperimentKind, ExperimentSpec};

/// One parsed block of settings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Section {
    pub name: Option<String>,
    pub entries: BTreeMap<String, String>,
}

pub fn parse_sections(text: &str) -> anyhow::Result<Vec<Section>> {
    let mut defaults = BTreeMap::new();
    let mut sections: Vec<Section> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            sections.push(Section { name: Some(name.trim().to_string()), entries: defaults.clone() });
            continue;
        }
        let (key, value) = line.split_once('=').with_context(|| format!("line {}: expected key = value", lineno + 1))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if key.is_empty() {
            bail!("line {}: empty key", lineno + 1);
        }
        match sections.last_mut() {
            Some(s) => s.entries.insert(key, value),
            None => defaults.insert(key, value),
        };
    }
    if sections.is_empty() {
        sections.push(Section { name: None, entries: defaults });
    }
    Ok(sections)
}

fn take<T: std::str::FromStr>(entries: &mut BTreeMap<String, String>, key: &str) -> anyhow::Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match entries.remove(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|e| anyhow::anyhow!("bad value for {key}: {e}")),
    }
}

impl Section {
    pub fn to_spec(&self) -> anyhow::Result<ExperimentSpec> {
        let label = self.name.clone().unwrap_or_else(|| "experiment".into());
        let mut e = self.entries.clone();
        let kind: String = take(&mut e, "experiment")?.with_context(|| format!("[{label}]: missing experiment"))?;
        let experiment = ExperimentKind::from_name(&kind).with_context(|| format!("[{label}]: unknown experiment {kind}"))?;
        let sizes_text: String = take(&mut e, "sizes")?.with_context(|| format!("[{label}]: missing sizes"))?;
        let sizes = sizes_text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u32>().with_context(|| format!("[{label}]: bad size {s}")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let spec = ExperimentSpec {
            experiment,
            sizes,
            samples_per_size: take(&mut e, "samples_per_size")?.with_context(|| format!("[{label}]: missing samples_per_size"))?,
            p: take(&mut e, "p")?.unwrap_or(0.5),
            epsilon: take(&mut e, "epsilon")?,
            master_seed: take(&mut e, "master_seed")?.unwrap_or(0),
            output_path: take(&mut e, "output_path")?,
            pi3_samples: take(&mut e, "pi3_samples")?,
            max_scan: take(&mut e, "max_scan")?,
        };
        if let Some(k) = e.keys().next() {
            bail!("[{label}]: unknown key {k}");
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Every experiment described by a config file.
pub fn parse_experiments(text: &str) -> anyhow::Result<Vec<ExperimentSpec>> {
    parse_sections(text)?.iter().map(Section::to_spec).collect()
}

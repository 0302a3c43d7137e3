//! Binary configuration snapshots.
//!
//! A snapshot is one ASCII header line
//! `PERC1 <box|annulus> <n> <p> <master_seed> <sample_id>` followed by the
//! packed edge states in canonical order. Configurations that were not
//! sampled write `-` for the last three fields.

use std::io::{BufRead, Read, Write};

use anyhow::{bail, Context};
use percolation_core::lattice::{Configuration, EdgeField, Provenance, Region, RegionKind};

pub const MAGIC: &str = "PERC1";

pub fn kind_name(kind: RegionKind) -> &'static str {
    match kind {
        RegionKind::Box => "box",
        RegionKind::Annulus => "annulus",
    }
}

pub fn kind_from_name(name: &str) -> Option<RegionKind> {
    match name {
        "box" => Some(RegionKind::Box),
        "annulus" => Some(RegionKind::Annulus),
        _ => None,
    }
}

pub fn write_snapshot<W: Write>(mut out: W, c: &Configuration) -> anyhow::Result<()> {
    let region = c.region();
    let tail = match c.provenance() {
        Some(p) => format!("{:?} {} {}", p.p, p.master_seed, p.sample_id),
        None => "- - -".to_string(),
    };
    writeln!(out, "{MAGIC} {} {} {tail}", kind_name(region.kind()), region.n())?;
    out.write_all(&c.to_packed_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn read_snapshot<R: Read>(input: R) -> anyhow::Result<Configuration> {
    let mut reader = std::io::BufReader::new(input);
    let mut header = Vec::new();
    reader.read_until(b'\n', &mut header)?;
    if header.pop() != Some(b'\n') {
        bail!("snapshot header is not terminated");
    }
    let header = String::from_utf8(header).context("snapshot header is not ASCII")?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 6 || fields[0] != MAGIC {
        bail!("not a {MAGIC} snapshot");
    }
    let kind = kind_from_name(fields[1]).context("unknown region kind")?;
    let region = Region::new(kind, fields[2].parse().context("bad region size")?)?;
    let provenance = if fields[3..].iter().all(|f| *f == "-") {
        None
    } else {
        Some(Provenance {
            p: fields[3].parse().context("bad probability")?,
            master_seed: fields[4].parse().context("bad seed")?,
            sample_id: fields[5].parse().context("bad sample id")?,
        })
    };
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    Ok(Configuration::from_packed_bytes(region, &bytes, provenance)?)
}

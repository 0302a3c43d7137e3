use alloc::vec;
use alloc::vec::Vec;

use super::hash;
use super::{Edge, Region};
use crate::error::{Error, Result};

/// Read access to edge states. Edges outside the region are neither open
/// nor closed.
pub trait EdgeField {
    fn region(&self) -> Region;

    /// State of the edge with the given canonical index.
    fn is_open_index(&self, index: usize) -> bool;

    fn is_open(&self, e: Edge) -> bool {
        self.region().edge_index(e).is_some_and(|i| self.is_open_index(i))
    }

    fn is_closed(&self, e: Edge) -> bool {
        self.region().edge_index(e).is_some_and(|i| !self.is_open_index(i))
    }
}

impl<F: EdgeField + ?Sized> EdgeField for &F {
    fn region(&self) -> Region {
        (**self).region()
    }
    fn is_open_index(&self, index: usize) -> bool {
        (**self).is_open_index(index)
    }
    fn is_open(&self, e: Edge) -> bool {
        (**self).is_open(e)
    }
    fn is_closed(&self, e: Edge) -> bool {
        (**self).is_closed(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub p: f64,
    pub master_seed: u64,
    pub sample_id: u64,
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability)
    }
}

/// Materialized edge states, one bit per edge in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    region: Region,
    bits: Vec<u64>,
    provenance: Option<Provenance>,
}

impl Configuration {
    pub fn sample(region: Region, p: f64, master_seed: u64, sample_id: u64) -> Result<Self> {
        check_probability(p)?;
        let key = hash::sample_key(master_seed, sample_id);
        let t = hash::threshold(p);
        let m = region.edge_count();
        let mut bits = vec![0u64; m.div_ceil(64)];
        for (w, word) in bits.iter_mut().enumerate() {
            let lo = w * 64;
            let hi = (lo + 64).min(m);
            let mut acc = 0u64;
            for i in lo..hi {
                if hash::is_open(key, i as u64, t) {
                    acc |= 1 << (i - lo);
                }
            }
            *word = acc;
        }
        Ok(Configuration { region, bits, provenance: Some(Provenance { p, master_seed, sample_id }) })
    }

    pub fn from_fn(region: Region, mut open: impl FnMut(Edge) -> bool) -> Self {
        let m = region.edge_count();
        let mut bits = vec![0u64; m.div_ceil(64)];
        for (i, e) in region.edges().enumerate() {
            if open(e) {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        Configuration { region, bits, provenance: None }
    }

    pub fn from_states(region: Region, states: &[bool]) -> Result<Self> {
        if states.len() != region.edge_count() {
            return Err(Error::InvalidPath);
        }
        let mut bits = vec![0u64; states.len().div_ceil(64)];
        for (i, &s) in states.iter().enumerate() {
            if s {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Configuration { region, bits, provenance: None })
    }

    /// The low `edge_count` bits of `mask`, bit `i` for edge `i`.
    pub fn from_mask(region: Region, mask: u64) -> Result<Self> {
        let m = region.edge_count();
        if m > 64 {
            return Err(Error::TooManyEdges);
        }
        let keep = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Ok(Configuration { region, bits: vec![mask & keep], provenance: None })
    }

    pub fn all_open(region: Region) -> Self {
        Self::from_fn(region, |_| true)
    }

    pub fn all_closed(region: Region) -> Self {
        Self::from_fn(region, |_| false)
    }

    /// Only the listed edges open.
    pub fn with_open_edges(region: Region, open: &[Edge]) -> Result<Self> {
        let mut states = vec![false; region.edge_count()];
        for e in open {
            states[region.edge_index(*e).ok_or(Error::OutsideRegion)?] = true;
        }
        Self::from_states(region, &states)
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    pub fn edge_count(&self) -> usize {
        self.region.edge_count()
    }

    pub fn open_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.edge_count()).map(move |i| self.is_open_index(i))
    }

    /// Copy with the given edges toggled.
    pub fn with_toggled(&self, edges: &[Edge]) -> Result<Self> {
        let mut bits = self.bits.clone();
        for e in edges {
            let i = self.region.edge_index(*e).ok_or(Error::OutsideRegion)?;
            bits[i / 64] ^= 1 << (i % 64);
        }
        Ok(Configuration { region: self.region, bits, provenance: None })
    }

    /// States packed eight per byte, least significant bit first.
    pub fn to_packed_bytes(&self) -> Vec<u8> {
        let m = self.edge_count();
        let mut out = vec![0u8; m.div_ceil(8)];
        for i in 0..m {
            if self.is_open_index(i) {
                out[i / 8] |= 1 << (i % 8);
            }
        }
        out
    }

    /// Inverse of [`Configuration::to_packed_bytes`]. Padding bits must be zero.
    pub fn from_packed_bytes(region: Region, bytes: &[u8], provenance: Option<Provenance>) -> Result<Self> {
        let m = region.edge_count();
        if bytes.len() != m.div_ceil(8) {
            return Err(Error::InvalidPath);
        }
        if m % 8 != 0 && bytes[m / 8] >> (m % 8) != 0 {
            return Err(Error::InvalidPath);
        }
        if let Some(p) = provenance {
            check_probability(p.p)?;
        }
        let mut bits = vec![0u64; m.div_ceil(64)];
        for i in 0..m {
            if bytes[i / 8] >> (i % 8) & 1 == 1 {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Configuration { region, bits, provenance })
    }
}

impl EdgeField for Configuration {
    fn region(&self) -> Region {
        self.region
    }

    #[inline]
    fn is_open_index(&self, index: usize) -> bool {
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }
}

/// Hash-on-demand view of a sampled configuration. Agrees bit for bit with
/// [`Configuration::sample`] for the same arguments, but only pays for the
/// edges that are actually queried.
#[derive(Debug, Clone, Copy)]
pub struct LazyConfiguration {
    region: Region,
    key: u64,
    threshold: u128,
}

impl LazyConfiguration {
    pub fn new(region: Region, p: f64, master_seed: u64, sample_id: u64) -> Result<Self> {
        check_probability(p)?;
        Ok(LazyConfiguration {
            region,
            key: hash::sample_key(master_seed, sample_id),
            threshold: hash::threshold(p),
        })
    }
}

impl EdgeField for LazyConfiguration {
    fn region(&self) -> Region {
        self.region
    }

    #[inline]
    fn is_open_index(&self, index: usize) -> bool {
        hash::is_open(self.key, index as u64, self.threshold)
    }
}

//! Exact expectations by exhaustive enumeration of small regions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use percolation_core::crossings::{
    extremal_crossing, horizontal_crossing_exists, innermost_circuit, shortest_crossing, shortest_enclosing_circuit,
    Extremal,
};
use percolation_core::lattice::{Configuration, Region};
use percolation_core::{Error, Result};

/// Largest region the oracle will enumerate.
pub const MAX_ORACLE_EDGES: usize = 24;

/// Enumerable statistics. Lengths count as zero when the object is absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum OracleStatistic {
    #[value(name = "E_lowest_len")]
    LowestLength,
    #[value(name = "E_shortest_len")]
    ShortestLength,
    #[value(name = "P_crossing")]
    Crossing,
    #[value(name = "E_innermost_len")]
    InnermostLength,
    #[value(name = "E_shortest_circuit_len")]
    ShortestCircuitLength,
}

impl OracleStatistic {
    pub const ALL: [OracleStatistic; 5] = [
        OracleStatistic::LowestLength,
        OracleStatistic::ShortestLength,
        OracleStatistic::Crossing,
        OracleStatistic::InnermostLength,
        OracleStatistic::ShortestCircuitLength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OracleStatistic::LowestLength => "E_lowest_len",
            OracleStatistic::ShortestLength => "E_shortest_len",
            OracleStatistic::Crossing => "P_crossing",
            OracleStatistic::InnermostLength => "E_innermost_len",
            OracleStatistic::ShortestCircuitLength => "E_shortest_circuit_len",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Value of the statistic on one configuration.
    pub fn evaluate(self, c: &Configuration) -> Result<u64> {
        Ok(match self {
            OracleStatistic::LowestLength => extremal_crossing(c, Extremal::Lowest)?.length() as u64,
            OracleStatistic::ShortestLength => shortest_crossing(c)?.length() as u64,
            OracleStatistic::Crossing => horizontal_crossing_exists(c)? as u64,
            OracleStatistic::InnermostLength => innermost_circuit(c)?.length() as u64,
            OracleStatistic::ShortestCircuitLength => shortest_enclosing_circuit(c)?.length() as u64,
        })
    }
}

/// Sum of the statistic over all configurations, grouped by open-edge count.
pub fn sums_by_open_count(region: Region, statistic: OracleStatistic) -> Result<Vec<u128>> {
    let edges = region.edge_count();
    if edges > MAX_ORACLE_EDGES {
        return Err(Error::TooManyEdges);
    }
    let mut sums = vec![0u128; edges + 1];
    for mask in 0..1u64 << edges {
        let c = Configuration::from_mask(region, mask)?;
        sums[mask.count_ones() as usize] += statistic.evaluate(&c)? as u128;
    }
    Ok(sums)
}

/// Exact expectation of the statistic under edge density `p`.
pub fn enumerate_oracle(region: Region, statistic: OracleStatistic, p: &BigRational) -> Result<BigRational> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::InvalidProbability);
    }
    let sums = sums_by_open_count(region, statistic)?;
    let q = BigRational::one() - p;
    let edges = sums.len() - 1;
    let mut total = BigRational::zero();
    for (k, s) in sums.iter().enumerate() {
        if *s == 0 {
            continue;
        }
        let weight = num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), edges - k);
        total += weight * BigRational::from_integer(BigInt::from(*s));
    }
    Ok(total)
}

/// Parses `a/b`, an integer, or a decimal such as `0.25` exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((a, b)) = t.split_once('/') {
        let den: BigInt = b.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(a.trim().parse().ok()?, den));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    Some(BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len())))
}

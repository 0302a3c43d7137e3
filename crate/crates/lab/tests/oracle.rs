#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::*;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use percolation_core::lattice::{Configuration, Region};
use percolation_core::Error;
use percolation_lab::experiment::crossing_pass;
use percolation_lab::oracle::*;
use percolation_lab::stats::MeanEstimate;

fn golden() -> Vec<(OracleStatistic, Region, BigRational, BigRational)> {
    include_str!("data/golden.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let region = match f[1] {
                "box" => Region::square(f[2].parse().unwrap()).unwrap(),
                _ => Region::annulus(f[2].parse().unwrap()).unwrap(),
            };
            (OracleStatistic::from_name(f[0]).unwrap(), region, parse_rational(f[3]).unwrap(), parse_rational(f[4]).unwrap())
        })
        .collect()
}

#[test]
fn committed_constants_are_reproduced() {
    let rows = golden();
    assert_eq!(rows.len(), 3);
    for (stat, region, p, value) in rows {
        assert_eq!(enumerate_oracle(region, stat, &p).unwrap(), value, "{}", stat.name());
    }
    let lowest = &golden()[0];
    assert!((lowest.3.clone() * BigRational::from_integer(4096.into())).is_integer());
}

#[test]
fn enumeration_matches_brute_force_path_search() {
    // Uniform weights: the oracle at one half is the plain average of the
    // independent brute-force statistics over all 4096 configurations.
    let region = Region::square(1).unwrap();
    let (mut lowest, mut shortest, mut crossing) = (0u64, 0u64, 0u64);
    for mask in 0..1u64 << 12 {
        let c = Configuration::from_mask(region, mask).unwrap();
        if let Some(p) = lowest_crossing_brute(&c) {
            lowest += (p.len() - 1) as u64;
            shortest += shortest_crossing_brute(&c) as u64;
            crossing += 1;
        }
    }
    let half = parse_rational("1/2").unwrap();
    let avg = |s: u64| BigRational::new(s.into(), 4096.into());
    assert_eq!(enumerate_oracle(region, OracleStatistic::LowestLength, &half).unwrap(), avg(lowest));
    assert_eq!(enumerate_oracle(region, OracleStatistic::ShortestLength, &half).unwrap(), avg(shortest));
    assert_eq!(enumerate_oracle(region, OracleStatistic::Crossing, &half).unwrap(), avg(crossing));
}

#[test]
fn open_count_sums_give_the_polynomial_at_other_densities() {
    let region = Region::square(1).unwrap();
    let p = parse_rational("3/10").unwrap();
    let sums = sums_by_open_count(region, OracleStatistic::Crossing).unwrap();
    let direct: f64 = (0..1u64 << 12)
        .map(|mask| {
            let c = Configuration::from_mask(region, mask).unwrap();
            let k = c.open_count() as i32;
            (!left_right_crossings(&c, 1000).is_empty()) as u8 as f64 * 0.3f64.powi(k) * 0.7f64.powi(12 - k)
        })
        .sum();
    let exact = enumerate_oracle(region, OracleStatistic::Crossing, &p).unwrap().to_f64().unwrap();
    assert!((exact - direct).abs() < 1e-12);
    assert_eq!(sums[12], 1);
    assert_eq!(sums[0], 0);
}

#[test]
fn monte_carlo_agrees_with_the_oracle_within_three_sigma() {
    let half = parse_rational("1/2").unwrap();
    let region = Region::square(1).unwrap();
    let samples = 100_000;
    let pass = crossing_pass(1, 0.5, samples, 4242).unwrap();
    let lowest: Vec<f64> = pass.iter().map(|s| s.map_or(0.0, |x| x.lowest as f64)).collect();
    let shortest: Vec<f64> = pass.iter().map(|s| s.map_or(0.0, |x| x.shortest as f64)).collect();
    let crossing: Vec<f64> = pass.iter().map(|s| s.is_some() as u8 as f64).collect();
    for (stat, values) in [
        (OracleStatistic::LowestLength, lowest),
        (OracleStatistic::ShortestLength, shortest),
        (OracleStatistic::Crossing, crossing),
    ] {
        let exact = enumerate_oracle(region, stat, &half).unwrap().to_f64().unwrap();
        let m = MeanEstimate::of(&values).unwrap();
        assert!((m.mean - exact).abs() < 3.0 * m.se, "{}: {} vs {exact}", stat.name(), m.mean);
    }
}

#[test]
fn circuit_statistics_need_an_enumerable_annulus() {
    // The smallest annulus already has 60 edges.
    let half = parse_rational("1/2").unwrap();
    assert_eq!(Region::annulus(1).unwrap().edge_count(), 60);
    for stat in [OracleStatistic::InnermostLength, OracleStatistic::ShortestCircuitLength] {
        assert_eq!(enumerate_oracle(Region::annulus(1).unwrap(), stat, &half), Err(Error::TooManyEdges));
        assert_eq!(enumerate_oracle(Region::square(1).unwrap(), stat, &half), Err(Error::WrongRegionKind));
    }
}

mod common;

use common::{edge, v};
use percolation_core::error::Error;
use percolation_core::lattice::*;
use proptest::prelude::*;

fn parse_hex(s: &str) -> Vec<u8> {
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).unwrap()).collect()
}

#[test]
fn sampled_bits_match_the_committed_vectors() {
    let text = include_str!("data/sample_vectors.txt");
    let mut checked = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let n: u32 = f[1].parse().unwrap();
        let region = match f[0] {
            "box" => Region::square(n).unwrap(),
            _ => Region::annulus(n).unwrap(),
        };
        let (p, seed, id): (f64, u64, u64) = (f[2].parse().unwrap(), f[3].parse().unwrap(), f[4].parse().unwrap());
        let c = Configuration::sample(region, p, seed, id).unwrap();
        assert_eq!(c.to_packed_bytes(), parse_hex(f[5]), "{line}");
        let lazy = LazyConfiguration::new(region, p, seed, id).unwrap();
        assert!(region.edges().all(|e| lazy.is_open(e) == c.is_open(e)));
        checked += 1;
    }
    assert_eq!(checked, 4);
}

#[test]
fn canonical_indices_in_box1() {
    let r = Region::square(1).unwrap();
    assert_eq!(r.edge_index(edge(v(-1, -1), v(0, -1))), Some(0));
    assert_eq!(r.edge_index(edge(v(0, 1), v(1, 1))), Some(5));
    assert_eq!(r.edge_index(edge(v(1, 0), v(1, 1))), Some(11));
    assert_eq!(r.edge_index(edge(v(1, 1), v(2, 1))), None);
    assert_eq!(Edge::new(v(0, 0), v(1, 1)), Err(Error::InvalidPath));
}

#[test]
fn edge_counts_match_enumeration() {
    for n in 1..=4u32 {
        let r = Region::square(n).unwrap();
        let n = n as i32;
        let mut count = 0;
        for x in -n..=n {
            for y in -n..=n {
                count += (x < n) as usize + (y < n) as usize;
            }
        }
        assert_eq!(count, 2 * (2 * n as usize + 1) * 2 * n as usize);
        assert_eq!(r.edge_count(), count);
        assert_eq!(r.edges().count(), count);
    }
    for n in 1..=3u32 {
        let r = Region::annulus(n).unwrap();
        let manual = Region::square(3 * n)
            .unwrap()
            .edges()
            .filter(|e| e.endpoints().iter().all(|u| u.norm_inf() > n))
            .count();
        assert_eq!(r.edge_count(), manual);
    }
}

#[test]
fn dual_edges_share_midpoints_and_invert() {
    let h = dual_of(edge(v(0, 0), v(1, 0)));
    assert_eq!(h.endpoints().map(|f| f.center2()), [(1, -1), (1, 1)]);
    let u = dual_of(edge(v(0, 0), v(0, 1)));
    assert_eq!(u.endpoints().map(|f| f.center2()), [(-1, 1), (1, 1)]);
    let r = Region::square(6).unwrap();
    let c = Configuration::sample(r, 0.5, 3, 0).unwrap();
    for e in r.edges().filter(|e| c.is_open(*e)).take(100) {
        let d = dual_of(e);
        assert_eq!(primal_of(d), e);
        assert_ne!(d.orientation(), e.orientation());
        let [a, b] = d.endpoints();
        let mid = ((a.center2().0 + b.center2().0) / 2, (a.center2().1 + b.center2().1) / 2);
        assert_eq!(mid, e.midpoint2());
        assert_eq!(DualEdge::between(a, b).unwrap(), d);
    }
}

#[test]
fn extreme_probabilities_and_bad_input() {
    let r = Region::square(3).unwrap();
    assert_eq!(Configuration::sample(r, 1.0, 5, 5).unwrap().open_count(), r.edge_count());
    assert_eq!(Configuration::sample(r, 0.0, 5, 5).unwrap().open_count(), 0);
    assert_eq!(Configuration::sample(r, 1.5, 5, 5), Err(Error::InvalidProbability));
    assert!(Region::square(0).is_err());
    assert!(Region::square(MAX_REGION_SIZE + 1).is_err());
}

#[test]
fn sampling_is_deterministic_and_ids_are_independent() {
    let r = Region::annulus(5).unwrap();
    let a = Configuration::sample(r, 0.5, 77, 3).unwrap();
    let b = Configuration::sample(r, 0.5, 77, 3).unwrap();
    assert_eq!(a, b);
    let other = Configuration::sample(r, 0.5, 77, 4).unwrap();
    let agree = r.edges().filter(|e| a.is_open(*e) == other.is_open(*e)).count();
    let m = r.edge_count() as f64;
    assert!((agree as f64 / m - 0.5).abs() < 0.05);
}

#[test]
fn open_fraction_at_one_half() {
    let r = Region::square(250).unwrap();
    let (mut open, mut total) = (0usize, 0usize);
    for id in 0..4 {
        let c = Configuration::sample(r, 0.5, 2024, id).unwrap();
        open += c.open_count();
        total += c.edge_count();
    }
    assert!(total >= 1_000_000);
    assert!((open as f64 / total as f64 - 0.5).abs() < 0.002, "{open}/{total}");
}

#[test]
fn packed_bytes_round_trip_and_reject_padding() {
    let r = Region::square(2).unwrap();
    let c = Configuration::sample(r, 0.5, 1, 2).unwrap();
    let bytes = c.to_packed_bytes();
    let back = Configuration::from_packed_bytes(r, &bytes, c.provenance()).unwrap();
    assert_eq!(back, c);
    // Box(1) has 12 edges, so its second byte carries four padding bits.
    let small = Region::square(1).unwrap();
    let mut bad = Configuration::all_open(small).to_packed_bytes();
    assert_eq!(bad, [0xff, 0x0f]);
    bad[1] |= 0x80;
    assert!(Configuration::from_packed_bytes(small, &bad, None).is_err());
    assert!(Configuration::from_packed_bytes(r, &bytes[1..], None).is_err());
}

proptest! {
    #[test]
    fn edge_indices_are_a_bijection(n in 1u32..6, annulus in any::<bool>()) {
        let r = if annulus { Region::annulus(n).unwrap() } else { Region::square(n).unwrap() };
        for (i, e) in r.edges().enumerate() {
            prop_assert_eq!(r.edge_index(e), Some(i));
            prop_assert_eq!(r.edge_at(i), Some(e));
        }
        for (i, u) in r.vertices().enumerate() {
            prop_assert_eq!(r.vertex_index(u), Some(i));
            prop_assert_eq!(r.vertex_at(i), Some(u));
        }
        prop_assert_eq!(r.edge_at(r.edge_count()), None);
    }

    #[test]
    fn toggling_twice_restores(seed in any::<u64>(), picks in proptest::collection::vec(0usize..60, 0..10)) {
        let r = Region::square(2).unwrap();
        let c = Configuration::sample(r, 0.5, seed, 0).unwrap();
        let edges: Vec<Edge> = picks.iter().map(|i| r.edge_at(i % r.edge_count()).unwrap()).collect();
        let twice = c.with_toggled(&edges).unwrap().with_toggled(&edges).unwrap();
        prop_assert!(r.edges().all(|e| twice.is_open(e) == c.is_open(e)));
    }

    #[test]
    fn edges_normalize_their_endpoints(x in -50i32..50, y in -50i32..50, dir in 0usize..4) {
        let u = v(x, y);
        let w = u.neighbors()[dir];
        let e = edge(u, w);
        prop_assert_eq!(e, edge(w, u));
        prop_assert!(e.endpoint_a() < e.endpoint_b());
        prop_assert!(e.contains(u) && e.contains(w));
    }
}

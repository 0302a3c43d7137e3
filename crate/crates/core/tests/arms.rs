mod common;

use common::*;
use percolation_core::arms::*;
use percolation_core::crossings::{extremal_crossing, Extremal};
use percolation_core::lattice::{dual_of, Configuration, DualVertex, Edge, EdgeField, Rect, Region, Vertex};
use percolation_core::Error;
use proptest::prelude::*;

/// Three-arm event at an edge from its definition in real coordinates.
fn three_arm_brute(
    c: &Configuration,
    e: Edge,
    m: u32,
    keep_vertex: &dyn Fn(Vertex) -> bool,
    keep_face: &dyn Fn(DualVertex) -> bool,
) -> bool {
    let [a, b] = e.endpoints();
    let (cx, cy) = ((a.x + b.x) as f64 / 2.0, (a.y + b.y) as f64 / 2.0);
    let m = m as f64;
    let gap = |x: f64, y: f64| (x - cx).abs().max((y - cy).abs());
    let in_box = |u: Vertex| keep_vertex(u) && gap(u.x as f64, u.y as f64) <= m + 0.5;
    let on_edge = |u: Vertex| in_box(u) && gap(u.x as f64, u.y as f64) >= m;
    let face_gap = |f: DualVertex| gap(f.x as f64 + 0.5, f.y as f64 + 0.5);
    let starts: Vec<DualVertex> = dual_of(e).endpoints().into_iter().filter(|f| keep_face(*f)).collect();
    let closed = closed_reach(c, &starts, &|f| keep_face(f) && face_gap(f) < m, &|f| keep_face(f) && face_gap(f) >= m);
    if !closed {
        return false;
    }
    let pa = paths_from(c, a, &[b], &in_box, &on_edge, 1_000_000);
    let pb = paths_from(c, b, &[a], &in_box, &on_edge, 1_000_000);
    disjoint_pair(&pa, &pb)
}

fn box_fits(region: Region, e: Edge, m: u32) -> bool {
    let [a, b] = e.endpoints();
    let m = m as i32;
    let r = region.n() as i32;
    let (x0, x1) = (a.x.min(b.x) - m, a.x.max(b.x) + m);
    let (y0, y1) = (a.y.min(b.y) - m, a.y.max(b.y) + m);
    x0 >= -r && x1 <= r && y0 >= -r && y1 <= r
}

#[test]
fn three_arm_at_edge_matches_path_enumeration() {
    let region = Region::square(3).unwrap();
    let mut hits = 0;
    for c in sampled(region, 0.5, 101, 40) {
        for e in region.edges() {
            for m in 0..=3 {
                let got = three_arm_at_edge(&c, e, m);
                if !box_fits(region, e, m) {
                    assert_eq!(got, Err(Error::RadiusOverflow));
                    continue;
                }
                let want = three_arm_brute(&c, e, m, &|_| true, &|_| true);
                assert_eq!(got.unwrap(), want, "edge {e:?} radius {m}");
                hits += usize::from(want && m > 0);
            }
        }
    }
    assert!(hits > 100, "too few positive instances: {hits}");
}

#[test]
fn half_plane_three_arm_matches_path_enumeration() {
    let region = Region::square(4).unwrap();
    let e = reference_edge();
    let mut hits = 0;
    for c in sampled(region, 0.5, 102, 300) {
        for n in 0..=3 {
            let want = three_arm_brute(&c, e, n, &|u| u.y >= 0, &|f| f.y >= 0);
            assert_eq!(half_plane_three_arm(&c, n).unwrap(), want, "radius {n}");
            hits += usize::from(want && n > 0);
        }
    }
    assert!(hits > 20);
}

#[test]
fn three_arm_edge_cases() {
    let region = Region::square(4).unwrap();
    let e = reference_edge();
    for m in 1..=3 {
        assert!(!three_arm_at_edge(&Configuration::all_open(region), e, m).unwrap());
        assert!(!three_arm_at_edge(&Configuration::all_closed(region), e, m).unwrap());
    }
    // Radius zero is vacuous whatever the configuration.
    assert!(three_arm_at_edge(&Configuration::all_open(region), e, 0).unwrap());
    assert!(three_arm_at_edge(&Configuration::all_closed(region), e, 0).unwrap());
    let outside = Edge::horizontal(Vertex::new(10, 0));
    assert_eq!(three_arm_at_edge(&Configuration::all_open(region), outside, 1), Err(Error::OutsideRegion));
}

#[test]
fn middle_third_landing_is_a_restriction() {
    let region = Region::square(6).unwrap();
    let mut strict = 0;
    for c in sampled(region, 0.5, 103, 300) {
        let e = reference_edge();
        for m in 1..=5 {
            let all = three_arm_at_edge(&c, e, m).unwrap();
            let bottom = three_arm_at_edge_landing(&c, e, m, Landing::BottomMiddleThird).unwrap();
            assert!(all || !bottom);
            strict += usize::from(all && !bottom);
        }
    }
    assert!(strict > 0);
}

#[test]
fn every_lowest_crossing_edge_carries_three_local_arms() {
    let region = Region::square(8).unwrap();
    let n = 8i32;
    for (k, c) in sampled(region, 0.5, 104, 200).enumerate() {
        let Some(path) = extremal_crossing(&c, Extremal::Lowest).unwrap().path else { continue };
        for e in path.edges() {
            let [a, b] = e.endpoints();
            let room = [a.x + n, n - b.x, a.y + n, n - b.y].into_iter().min().unwrap();
            assert!(three_arm_at_edge(&c, e, room as u32).unwrap(), "sample {k} edge {e:?}");
        }
    }
}

fn ring_vertices(r: i32) -> Vec<Vertex> {
    Rect::centered(r).vertices().filter(|u| u.norm_inf() == r as u32).collect()
}

#[test]
fn annulus_three_arm_matches_path_enumeration() {
    let region = Region::square(3).unwrap();
    let mut hits = 0;
    for c in sampled(region, 0.55, 105, 250) {
        for (m, n) in [(1, 2), (1, 3), (2, 3)] {
            let center = |f: DualVertex| {
                let (x, y) = (f.x as f64 + 0.5, f.y as f64 + 0.5);
                x.abs().max(y.abs())
            };
            let starts: Vec<DualVertex> = (-4..4)
                .flat_map(|x| (-4..4).map(move |y| DualVertex::new(x, y)))
                .filter(|f| center(*f) == m as f64 - 0.5)
                .collect();
            let closed = closed_reach(
                &c,
                &starts,
                &|f| center(f) >= m as f64 - 0.5 && center(f) < n as f64,
                &|f| center(f) > n as f64,
            );
            let crossings = simple_paths(&c, &ring_vertices(m), &ring_vertices(n), 2_000_000);
            let want = closed && max_disjoint_family(&crossings) >= 2;
            assert_eq!(annulus_three_arm(&c, m as u32, n as u32).unwrap(), want, "m {m} n {n}");
            hits += usize::from(want);
        }
    }
    assert!(hits > 20);
}

#[test]
fn equal_radii_are_vacuous_and_bad_radii_rejected() {
    let c = Configuration::all_closed(Region::square(4).unwrap());
    assert!(annulus_three_arm(&c, 3, 3).unwrap());
    assert!(six_arm_annulus(&c, 2, 2, 0).unwrap());
    assert_eq!(annulus_three_arm(&c, 0, 3), Err(Error::InvalidGeometry));
    assert_eq!(annulus_three_arm(&c, 3, 2), Err(Error::InvalidGeometry));
    assert_eq!(annulus_three_arm(&c, 1, 5), Err(Error::RadiusOverflow));
    // An annulus region works once the inner radius clears its hole.
    let a = Configuration::all_open(Region::annulus(2).unwrap());
    assert!(!annulus_three_arm(&a, 3, 6).unwrap());
}

#[test]
fn six_arm_defect_threshold_on_the_open_lattice() {
    let region = Region::square(5).unwrap();
    let open = Configuration::all_open(region);
    for (m, n) in [(1u32, 3u32), (2, 5), (1, 5)] {
        // Each dual crossing of a fully open ring crosses n - m + 1 edges.
        let need = 3 * (n - m + 1);
        assert!(!six_arm_annulus(&open, m, n, need - 1).unwrap());
        assert!(six_arm_annulus(&open, m, n, need).unwrap());
    }
    assert!(!six_arm_annulus(&Configuration::all_closed(region), 1, 4, 100).unwrap());
}

#[test]
fn six_arm_budget_is_monotone_and_implies_three_arms() {
    let region = Region::square(6).unwrap();
    let mut seen = [0usize; 3];
    for c in sampled(region, 0.5, 106, 300) {
        let mut last = false;
        for budget in 0..=2 {
            let now = six_arm_annulus(&c, 1, 4, budget).unwrap();
            assert!(!last || now);
            seen[budget as usize] += usize::from(now);
            last = now;
        }
        if six_arm_annulus(&c, 1, 4, 0).unwrap() {
            assert!(annulus_three_arm(&c, 1, 4).unwrap());
        }
    }
    assert!(seen[2] > seen[0], "{seen:?}");
}

#[test]
fn one_arm_probability_at_radius_one_is_fifteen_sixteenths() {
    let region = Region::square(1).unwrap();
    let hits = (0..1u64 << 12)
        .filter(|&mask| one_arm(&Configuration::from_mask(region, mask).unwrap(), 1).unwrap())
        .count();
    assert_eq!(hits * 16, 15 * 4096);
}

/// Five-arm test read off the definition, one arm at a time.
fn five_arm_brute(c: &Configuration, w: Vertex, z: &FiveArmZones) -> bool {
    let f = z.frame;
    let at = |dx: i32, dy: i32| v(w.x + dx, w.y + dy);
    let state = |a: Vertex, b: Vertex| Edge::new(a, b).ok().filter(|e| c.region().contains_edge(*e)).map(|e| c.is_open(e));
    if state(w, at(0, 1)) != Some(true) || state(w, at(1, 0)) != Some(true) || state(at(-1, 0), w) != Some(true) {
        return false;
    }
    if state(at(-1, 1), at(0, 1)) != Some(false) || state(at(-1, -1), at(0, -1)) != Some(false) {
        return false;
    }
    let face_in = |g: DualVertex| g.x >= f.x_min && g.x < f.x_max && g.y >= f.y_min && g.y < f.y_max;
    let (a1, b1) = z.closed_top;
    let north = [DualVertex::new(w.x - 1, w.y), DualVertex::new(w.x - 1, w.y + 1)];
    if !closed_reach(c, &north, &face_in, &|g| g.y == f.y_max && g.x >= a1 && g.x + 1 <= b1) {
        return false;
    }
    let south = [DualVertex::new(w.x - 1, w.y - 1), DualVertex::new(w.x - 1, w.y - 2)];
    if !closed_reach(c, &south, &face_in, &|g| g.y == f.y_min - 1 && g.x >= f.x_min && g.x < f.x_max) {
        return false;
    }
    let in_frame = |u: Vertex| f.contains(u);
    if paths_from(c, at(-1, 0), &[w], &in_frame, &|u| u.x == f.x_min, 5_000_000).is_empty() {
        return false;
    }
    let (a2, b2) = z.open_top;
    let up = paths_from(c, at(0, 1), &[w], &in_frame, &|u| u.y == f.y_max && u.x >= a2 && u.x <= b2, 5_000_000);
    let side = paths_from(c, at(1, 0), &[w], &in_frame, &|u| u.x == f.x_max, 5_000_000);
    disjoint_pair(&up, &side)
}

/// Edges of a polyline through the given corners.
fn polyline(corners: &[(i32, i32)]) -> Vec<Edge> {
    let mut out = Vec::new();
    for pair in corners.windows(2) {
        let (mut p, q) = (v(pair[0].0, pair[0].1), v(pair[1].0, pair[1].1));
        while p != q {
            let step = v(p.x + (q.x - p.x).signum(), p.y + (q.y - p.y).signum());
            out.push(edge(p, step));
            p = step;
        }
    }
    out
}

#[test]
fn hand_drawn_five_arm_point_is_found() {
    // An 11 x 11 box where only the drawn open arms are open: one heads west
    // from (1, 2), one wanders north to the top, one goes east.
    let region = Region::square(5).unwrap();
    let w = v(1, 2);
    let mut open = Vec::new();
    open.extend(polyline(&[(1, 2), (-5, 2)]));
    open.extend(polyline(&[(1, 2), (1, 3), (3, 3), (3, 5)]));
    open.extend(polyline(&[(1, 2), (2, 2), (2, -3), (5, -3)]));
    let c = Configuration::with_open_edges(region, &open).unwrap();
    let zones = FiveArmZones::centered(5);
    assert!(five_arm_brute(&c, w, &zones));
    assert!(five_arm_point(&c, w, &zones).unwrap());
    assert_eq!(five_arm_point_search(&c, Rect::centered(4), &zones).unwrap(), Some(w));
    // Cutting any one open arm destroys the point.
    for cut in [edge(v(-3, 2), v(-4, 2)), edge(v(3, 4), v(3, 5)), edge(v(2, 0), v(2, -1))] {
        let broken = c.with_toggled(&[cut]).unwrap();
        assert!(!five_arm_brute(&broken, w, &zones));
        assert_eq!(five_arm_point_search(&broken, Rect::centered(4), &zones).unwrap(), None);
    }
    // Landing the northern open arm left of the open zone also fails.
    let shifted = FiveArmZones { open_top: (4, 5), ..zones };
    assert!(!five_arm_point(&c, w, &shifted).unwrap());
}

#[test]
fn five_arm_trivial_configurations() {
    let region = Region::square(5).unwrap();
    let zones = FiveArmZones::centered(5);
    for c in [Configuration::all_open(region), Configuration::all_closed(region)] {
        assert_eq!(five_arm_point_search(&c, Rect::centered(5), &zones).unwrap(), None);
    }
    let c = Configuration::all_open(region);
    assert_eq!(five_arm_point_search(&c, Rect::centered(6), &zones), Err(Error::InvalidGeometry));
    assert_eq!(
        five_arm_point_search(&c, Rect::centered(2), &FiveArmZones::centered(6)),
        Err(Error::RadiusOverflow)
    );
}

#[test]
fn five_arm_point_matches_the_per_arm_oracle() {
    let mut hits = 0;
    for (n, samples) in [(2u32, 3000u64), (3, 3000)] {
        let region = Region::square(n).unwrap();
        let zones = FiveArmZones::centered(n);
        let offset = FiveArmZones { closed_top: (-(n as i32), 1), open_top: (1, n as i32), ..zones };
        for c in sampled(region, 0.5, 107 + n as u64, samples) {
            for z in [zones, offset] {
                let mut first = None;
                for w in Rect::centered(n as i32).vertices() {
                    let want = five_arm_brute(&c, w, &z);
                    assert_eq!(five_arm_point(&c, w, &z).unwrap(), want, "n {n} w {w:?}");
                    if want && first.is_none() {
                        first = Some(w);
                    }
                    hits += usize::from(want);
                }
                assert_eq!(five_arm_point_search(&c, Rect::centered(n as i32), &z).unwrap(), first);
            }
        }
    }
    assert!(hits > 50, "{hits}");
}

#[test]
fn at_most_one_five_arm_point_in_the_half_scale_box() {
    let mut found = 0;
    for n in [4u32, 6, 8] {
        let region = Region::square(n).unwrap();
        let zones = FiveArmZones::centered(n);
        let half = Rect::centered(n as i32 / 2);
        for c in sampled(region, 0.5, 108 + n as u64, 3000) {
            let points: Vec<Vertex> = half.vertices().filter(|w| five_arm_point(&c, *w, &zones).unwrap()).collect();
            assert!(points.len() <= 1, "n {n}: {points:?}");
            assert_eq!(five_arm_point_search(&c, half, &zones).unwrap(), points.first().copied());
            found += points.len();
        }
    }
    assert!(found > 10, "{found}");
}

#[test]
fn arm_specs_decide_their_events() {
    let spec = ArmSpec::at(ArmPattern::ThreeArmEdge, 0).unwrap();
    assert_eq!(spec.region(), Region::square(1).unwrap());
    assert!(spec.occurs(&Configuration::all_closed(spec.region())).unwrap());
    let spec = ArmSpec::at(ArmPattern::FiveArmPoint, 5).unwrap();
    assert_eq!(spec.region(), Region::square(5).unwrap());
    let spec = ArmSpec::new(ArmPattern::ThreeArmAnnulus, 2, 4, 0).unwrap();
    let c = Configuration::sample(spec.region(), 0.5, 9, 0).unwrap();
    assert_eq!(spec.occurs(&c).unwrap(), annulus_three_arm(&c, 2, 4).unwrap());
    let small = Configuration::all_open(Region::square(2).unwrap());
    assert_eq!(ArmSpec::at(ArmPattern::ThreeArmEdge, 2).unwrap().occurs(&small), Err(Error::RadiusOverflow));
    for p in ArmPattern::ALL {
        let spec = if matches!(p, ArmPattern::ThreeArmAnnulus | ArmPattern::SixArmAnnulus) {
            ArmSpec::new(p, 2, 5, 0)
        } else {
            ArmSpec::at(p, 5)
        }
        .unwrap();
        let c = Configuration::sample(spec.region(), 0.5, 3, 1).unwrap();
        assert!(spec.occurs(&c).is_ok(), "{p:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn events_shrink_as_the_radius_grows(seed in any::<u64>(), p in 0.3f64..0.7) {
        let region = Region::square(7).unwrap();
        let c = Configuration::sample(region, p, seed, 0).unwrap();
        let e = reference_edge();
        for r in 1..=6u32 {
            prop_assert!(!three_arm_at_edge(&c, e, r).unwrap() || three_arm_at_edge(&c, e, r - 1).unwrap());
            prop_assert!(!half_plane_three_arm(&c, r).unwrap() || half_plane_three_arm(&c, r - 1).unwrap());
            prop_assert!(!one_arm(&c, r + 1).unwrap() || one_arm(&c, r).unwrap());
        }
        for m in 1..=6u32 {
            for n in m + 1..=7 {
                let here = annulus_three_arm(&c, m, n).unwrap();
                prop_assert!(!here || annulus_three_arm(&c, m, n - 1).unwrap());
                prop_assert!(!here || annulus_three_arm(&c, m + 1, n).unwrap());
            }
        }
    }

    #[test]
    fn three_arms_survive_shrinking_the_edge_box(seed in any::<u64>()) {
        // Arms to a far boundary restrict to arms to any nearer one.
        let region = Region::square(6).unwrap();
        let c = Configuration::sample(region, 0.5, seed, 1).unwrap();
        for e in region.edges().filter(|e| box_fits(region, *e, 2)) {
            if three_arm_at_edge(&c, e, 2).unwrap() {
                prop_assert!(three_arm_at_edge(&c, e, 1).unwrap());
            }
        }
    }
}

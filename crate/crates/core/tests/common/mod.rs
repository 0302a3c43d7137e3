//! Brute-force reference implementations used as test oracles. Everything
//! here enumerates explicitly and shares no search code with the library.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use percolation_core::lattice::{Configuration, DualVertex, Edge, EdgeField, Region, Vertex};

pub fn edge(u: Vertex, v: Vertex) -> Edge {
    Edge::new(u, v).unwrap()
}

pub fn v(x: i32, y: i32) -> Vertex {
    Vertex::new(x, y)
}

fn open_neighbors(c: &Configuration, u: Vertex) -> Vec<Vertex> {
    let region = c.region();
    u.neighbors()
        .into_iter()
        .filter(|w| region.contains(*w) && c.is_open(edge(u, *w)))
        .collect()
}

/// Every self-avoiding open path from a source to a target whose other
/// vertices are neither sources nor targets. Panics past `cap` paths.
pub fn simple_paths(c: &Configuration, sources: &[Vertex], targets: &[Vertex], cap: usize) -> Vec<Vec<Vertex>> {
    let src: HashSet<Vertex> = sources.iter().copied().collect();
    let tgt: HashSet<Vertex> = targets.iter().copied().collect();
    let mut out = Vec::new();
    fn go(
        c: &Configuration,
        src: &HashSet<Vertex>,
        tgt: &HashSet<Vertex>,
        path: &mut Vec<Vertex>,
        on: &mut HashSet<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
        cap: usize,
    ) {
        let u = *path.last().unwrap();
        if tgt.contains(&u) {
            out.push(path.clone());
            assert!(out.len() <= cap, "path enumeration exceeded its cap");
            return;
        }
        for w in open_neighbors(c, u) {
            if on.contains(&w) || src.contains(&w) {
                continue;
            }
            path.push(w);
            on.insert(w);
            go(c, src, tgt, path, on, out, cap);
            on.remove(&w);
            path.pop();
        }
    }
    for &s in sources {
        let mut path = vec![s];
        let mut on = HashSet::from([s]);
        go(c, &src, &tgt, &mut path, &mut on, &mut out, cap);
    }
    out
}

pub fn side(n: i32, which: char) -> Vec<Vertex> {
    (-n..=n)
        .map(|t| match which {
            'L' => v(-n, t),
            'R' => v(n, t),
            'B' => v(t, -n),
            _ => v(t, n),
        })
        .collect()
}

pub fn left_right_crossings(c: &Configuration, cap: usize) -> Vec<Vec<Vertex>> {
    let n = c.region().n() as i32;
    simple_paths(c, &side(n, 'L'), &side(n, 'R'), cap)
}

pub fn path_edges(p: &[Vertex]) -> BTreeSet<Edge> {
    p.windows(2).map(|w| edge(w[0], w[1])).collect()
}

/// Faces of the box columns lying below a crossing, counting the row of
/// faces just under the box.
pub fn faces_below(n: i32, crossing: &[Vertex]) -> BTreeSet<DualVertex> {
    let blocked = path_edges(crossing);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for x in -n..n {
        let f = DualVertex::new(x, -n - 1);
        seen.insert(f);
        queue.push_back(f);
    }
    while let Some(f) = queue.pop_front() {
        for u in f.neighbors() {
            if u.x < -n || u.x >= n || u.y < -n - 1 || u.y > n || seen.contains(&u) {
                continue;
            }
            if blocked.contains(&f.primal_between(u)) {
                continue;
            }
            seen.insert(u);
            queue.push_back(u);
        }
    }
    seen
}

/// The crossing with the fewest faces below it, with a check that it is
/// below every other crossing.
pub fn lowest_crossing_brute(c: &Configuration) -> Option<Vec<Vertex>> {
    let n = c.region().n() as i32;
    let all = left_right_crossings(c, 2_000_000);
    let below: Vec<BTreeSet<DualVertex>> = all.iter().map(|p| faces_below(n, p)).collect();
    let best = (0..all.len()).min_by_key(|&i| below[i].len())?;
    for b in &below {
        assert!(below[best].is_subset(b), "lowest crossing is not below every crossing");
    }
    Some(all[best].clone())
}

pub fn shortest_crossing_brute(c: &Configuration) -> usize {
    left_right_crossings(c, 2_000_000).iter().map(|p| p.len() - 1).min().unwrap_or(0)
}

/// Largest pairwise vertex-disjoint subfamily, by exhaustive branching.
pub fn max_disjoint_family(paths: &[Vec<Vertex>]) -> usize {
    let sets: Vec<BTreeSet<Vertex>> = paths.iter().map(|p| p.iter().copied().collect()).collect();
    fn go(sets: &[BTreeSet<Vertex>], from: usize, used: &mut BTreeSet<Vertex>, depth: usize, best: &mut usize) {
        *best = (*best).max(depth);
        for i in from..sets.len() {
            if sets[i].is_disjoint(used) {
                for x in &sets[i] {
                    used.insert(*x);
                }
                go(sets, i + 1, used, depth + 1, best);
                for x in &sets[i] {
                    used.remove(x);
                }
            }
        }
    }
    let mut best = 0;
    go(&sets, 0, &mut BTreeSet::new(), 0, &mut best);
    best
}

/// Winding number about the origin of a lattice cycle avoiding it, from the
/// summed turning angles.
pub fn turning_winding(cycle: &[Vertex]) -> i32 {
    let mut total = 0.0f64;
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        let ta = (a.y as f64).atan2(a.x as f64);
        let tb = (b.y as f64).atan2(b.x as f64);
        let mut d = tb - ta;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        total += d;
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i32
}

/// All open self-avoiding cycles in the region surrounding the origin, each
/// listed once, starting at its least vertex.
pub fn surrounding_circuits(c: &Configuration, cap: usize) -> Vec<Vec<Vertex>> {
    let region = c.region();
    let mut out = Vec::new();
    let verts: Vec<Vertex> = region.vertices().collect();
    for &s in &verts {
        let mut path = vec![s];
        let mut on = HashSet::from([s]);
        fn go(
            c: &Configuration,
            s: Vertex,
            path: &mut Vec<Vertex>,
            on: &mut HashSet<Vertex>,
            out: &mut Vec<Vec<Vertex>>,
            cap: usize,
        ) {
            let u = *path.last().unwrap();
            for w in open_neighbors(c, u) {
                if w == s && path.len() >= 4 {
                    // Keep one of the two traversal directions.
                    if path[1] < u && turning_winding(path) != 0 {
                        out.push(path.clone());
                        assert!(out.len() <= cap, "circuit enumeration exceeded its cap");
                    }
                    continue;
                }
                if w <= s || on.contains(&w) {
                    continue;
                }
                path.push(w);
                on.insert(w);
                go(c, s, path, on, out, cap);
                on.remove(&w);
                path.pop();
            }
        }
        go(c, s, &mut path, &mut on, &mut out, cap);
    }
    out
}

/// Faces enclosed by a simple cycle, by flood fill from far outside.
pub fn enclosed_faces(region: Region, cycle: &[Vertex]) -> BTreeSet<DualVertex> {
    let r = region.outer_radius();
    let mut closed = cycle.to_vec();
    closed.push(cycle[0]);
    let blocked = path_edges(&closed);
    let lo = -r - 2;
    let hi = r + 1;
    let mut outside = BTreeSet::new();
    let start = DualVertex::new(lo, lo);
    outside.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for u in f.neighbors() {
            if u.x < lo || u.x > hi || u.y < lo || u.y > hi || outside.contains(&u) {
                continue;
            }
            if blocked.contains(&f.primal_between(u)) {
                continue;
            }
            outside.insert(u);
            queue.push_back(u);
        }
    }
    let mut inside = BTreeSet::new();
    for x in lo..=hi {
        for y in lo..=hi {
            let f = DualVertex::new(x, y);
            if !outside.contains(&f) {
                inside.insert(f);
            }
        }
    }
    inside
}

/// Same vertex cycle up to rotation and reversal.
pub fn same_cycle(a: &[Vertex], b: &[Vertex]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let k = a.len();
    let Some(start) = b.iter().position(|x| *x == a[0]) else { return false };
    let fwd = (0..k).all(|i| a[i] == b[(start + i) % k]);
    let bwd = (0..k).all(|i| a[i] == b[(start + k - i) % k]);
    fwd || bwd
}

/// Deterministic pseudo-random configurations for oracle sweeps.
pub fn sampled(region: Region, p: f64, seed: u64, count: u64) -> impl Iterator<Item = Configuration> {
    (0..count).map(move |k| Configuration::sample(region, p, seed, k).unwrap())
}

/// Every self-avoiding open path from `start` through vertices accepted by
/// `allowed` and not in `forbidden`, stopping at the first vertex accepted by
/// `is_target`.
pub fn paths_from(
    c: &Configuration,
    start: Vertex,
    forbidden: &[Vertex],
    allowed: &dyn Fn(Vertex) -> bool,
    is_target: &dyn Fn(Vertex) -> bool,
    cap: usize,
) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    fn go(
        c: &Configuration,
        path: &mut Vec<Vertex>,
        on: &mut HashSet<Vertex>,
        allowed: &dyn Fn(Vertex) -> bool,
        is_target: &dyn Fn(Vertex) -> bool,
        out: &mut Vec<Vec<Vertex>>,
        cap: usize,
    ) {
        let u = *path.last().unwrap();
        if is_target(u) {
            out.push(path.clone());
            assert!(out.len() <= cap, "path enumeration exceeded its cap");
            return;
        }
        for w in open_neighbors(c, u) {
            if on.contains(&w) || !allowed(w) {
                continue;
            }
            path.push(w);
            on.insert(w);
            go(c, path, on, allowed, is_target, out, cap);
            on.remove(&w);
            path.pop();
        }
    }
    if allowed(start) && !forbidden.contains(&start) {
        let mut on: HashSet<Vertex> = forbidden.iter().copied().collect();
        on.insert(start);
        go(c, &mut vec![start], &mut on, allowed, is_target, &mut out, cap);
    }
    out
}

/// Whether some path of `a` and some path of `b` share no vertex.
pub fn disjoint_pair(a: &[Vec<Vertex>], b: &[Vec<Vertex>]) -> bool {
    let sets: Vec<HashSet<Vertex>> = b.iter().map(|q| q.iter().copied().collect()).collect();
    a.iter().any(|p| sets.iter().any(|s| p.iter().all(|x| !s.contains(x))))
}

/// Breadth-first reachability over closed dual edges of region edges.
pub fn closed_reach(
    c: &Configuration,
    starts: &[DualVertex],
    allowed: &dyn Fn(DualVertex) -> bool,
    is_target: &dyn Fn(DualVertex) -> bool,
) -> bool {
    let region = c.region();
    let mut seen: HashSet<DualVertex> = starts.iter().copied().collect();
    let mut queue: VecDeque<DualVertex> = starts.iter().copied().collect();
    while let Some(f) = queue.pop_front() {
        if is_target(f) {
            return true;
        }
        for u in f.neighbors() {
            let e = f.primal_between(u);
            if seen.contains(&u) || !(allowed(u) || is_target(u)) || !region.contains_edge(e) || c.is_open(e) {
                continue;
            }
            seen.insert(u);
            queue.push_back(u);
        }
    }
    false
}

/// Winding number of a closed polyline about the origin by summing turning
/// angles in floating point.
pub fn angle_winding(points: &[(f64, f64)]) -> i32 {
    let mut total = 0.0f64;
    for i in 0..points.len() {
        let (a, b) = (points[i], points[(i + 1) % points.len()]);
        let mut d = b.1.atan2(b.0) - a.1.atan2(a.0);
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        total += d;
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i32
}

fn pt(v: Vertex) -> (f64, f64) {
    (v.x as f64, v.y as f64)
}

fn face_pt(f: DualVertex) -> (f64, f64) {
    (f.x as f64 + 0.5, f.y as f64 + 0.5)
}

/// Checks a proposed detour `p`, arc `q`, shield `r` against the definition
/// directly, using flood-fill interiors and angle sums. `tol` is `num/den`.
pub fn detour_conditions(
    c: &Configuration,
    gamma: &[Vertex],
    p: &[Vertex],
    q: &[Vertex],
    r: &[DualVertex],
    (num, den): (u64, u64),
) -> Result<(), &'static str> {
    let region = c.region();
    let m = p.len() - 1;
    if m < 2 || p.iter().collect::<HashSet<_>>().len() != p.len() {
        return Err("detour is not a self-avoiding path");
    }
    if p.windows(2).any(|w| !w[0].is_adjacent(w[1]) || !c.is_open(edge(w[0], w[1]))) {
        return Err("detour is not open");
    }
    let inside = enclosed_faces(region, gamma);
    let on_gamma: HashSet<Vertex> = gamma.iter().copied().collect();
    let outside = |u: &Vertex| {
        region.contains(*u) && !on_gamma.contains(u) && !inside.contains(&DualVertex::new(u.x, u.y))
    };
    if !p[1..m].iter().all(outside) {
        return Err("detour leaves the exterior");
    }
    // Straightness at the endpoints, probing all four orientations.
    let k = gamma.len();
    let at = |u: Vertex| gamma.iter().position(|x| *x == u);
    let (Some(i0), Some(im)) = (at(p[0]), at(p[m])) else { return Err("endpoint off the circuit") };
    let up = (p[1].x - p[0].x, p[1].y - p[0].y);
    if (p[m - 1].x - p[m].x, p[m - 1].y - p[m].y) != up {
        return Err("end steps are not parallel");
    }
    let side = (up.1, -up.0);
    for &i in &[i0, im] {
        let w = gamma[i];
        let nb: HashSet<Vertex> = [gamma[(i + 1) % k], gamma[(i + k - 1) % k]].into_iter().collect();
        let want: HashSet<Vertex> =
            [Vertex::new(w.x + side.0, w.y + side.1), Vertex::new(w.x - side.0, w.y - side.1)].into_iter().collect();
        if nb != want {
            return Err("circuit bends at an endpoint");
        }
    }
    // The arc must be a contiguous piece of the circuit joining the endpoints.
    let fwd: Vec<Vertex> = (0..=(im + k - i0) % k).map(|s| gamma[(i0 + s) % k]).collect();
    let bwd: Vec<Vertex> = (0..=(i0 + k - im) % k).map(|s| gamma[(i0 + k - s) % k]).collect();
    if q != fwd.as_slice() && q != bwd.as_slice() {
        return Err("arc is not a piece of the circuit");
    }
    let mut loop_pts: Vec<(f64, f64)> = q.iter().map(|u| pt(*u)).collect();
    loop_pts.extend(p[1..m].iter().rev().map(|u| pt(*u)));
    if angle_winding(&loop_pts) != 0 {
        return Err("arc and detour surround the origin");
    }
    // Shield: closed dual path between the two corner faces beside the end steps.
    let half = |w: Vertex, dx: f64| {
        let (ux, uy) = (up.0 as f64, up.1 as f64);
        let (sx, sy) = (side.0 as f64, side.1 as f64);
        (w.x as f64 + 0.5 * (dx * sx + ux), w.y as f64 + 0.5 * (dx * sy + uy))
    };
    if r.len() < 3 || face_pt(r[0]) != half(p[0], -1.0) || face_pt(r[r.len() - 1]) != half(p[m], 1.0) {
        return Err("shield ends at the wrong faces");
    }
    let up_step = |f: DualVertex| DualVertex::new(f.x + up.0, f.y + up.1);
    if r[1] != up_step(r[0]) || r[r.len() - 2] != up_step(r[r.len() - 1]) {
        return Err("shield ends are not perpendicular");
    }
    if r.iter().collect::<HashSet<_>>().len() != r.len() {
        return Err("shield is not self-avoiding");
    }
    if r.windows(2).any(|w| !w[0].is_adjacent(w[1]) || !c.is_closed(w[0].primal_between(w[1]))) {
        return Err("shield is not closed");
    }
    let mut curve: Vec<(f64, f64)> = r.iter().map(|f| face_pt(*f)).collect();
    curve.extend(p[1..m].iter().rev().map(|u| pt(*u)));
    if angle_winding(&curve) != 0 {
        return Err("shield curve encloses the origin");
    }
    if m as u64 * den > (q.len() as u64 - 1) * num {
        return Err("detour too long");
    }
    Ok(())
}

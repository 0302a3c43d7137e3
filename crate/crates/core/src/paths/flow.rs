//! Unit-capacity augmenting paths on the implicit open-edge network.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::grid::Grid;
use super::{loop_erase, LatticePath, OpenPath};
use crate::error::{Error, Result};
use crate::lattice::{Edge, EdgeField, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Disjointness {
    /// No shared vertex, endpoints included.
    #[default]
    Vertex,
    /// No shared edge.
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointPaths {
    pub count: usize,
    pub paths: Vec<OpenPath>,
}

/// Maximum number of pairwise disjoint open paths from `sources` to
/// `targets`, with witnesses.
pub fn max_disjoint_open_paths<F: EdgeField + ?Sized>(
    field: &F,
    sources: &[Vertex],
    targets: &[Vertex],
    mode: Disjointness,
) -> Result<DisjointPaths> {
    let region = field.region();
    if sources.iter().any(|s| targets.contains(s)) {
        return Err(Error::InvalidGeometry);
    }
    if sources.iter().chain(targets).any(|v| !region.contains(*v)) {
        return Err(Error::OutsideRegion);
    }
    let paths = match mode {
        Disjointness::Vertex => {
            let class = [SinkClass { members: targets, capacity: usize::MAX, terminal: true }];
            vertex_disjoint_flow(field, sources, &class, |_| true, usize::MAX)
        }
        Disjointness::Edge => edge_disjoint_flow(field, sources, targets),
    };
    Ok(DisjointPaths { count: paths.len(), paths })
}

/// Targets grouped into classes, each absorbing at most `capacity` paths.
pub(crate) struct SinkClass<'a> {
    pub members: &'a [Vertex],
    pub capacity: usize,
    /// Paths may not continue past a member of a terminal class.
    pub terminal: bool,
}

const NONE: u8 = u8::MAX;
const FROM_SOURCE: u8 = 4;
// Values of `next` at or above this mark a sink class.
const TO_SINK: u8 = 8;

fn dir_index(from: Vertex, to: Vertex) -> u8 {
    match (to.x - from.x, to.y - from.y) {
        (1, 0) => 0,
        (0, 1) => 1,
        (-1, 0) => 2,
        _ => 3,
    }
}

fn step(v: Vertex, dir: u8) -> Vertex {
    v.neighbors()[dir as usize]
}

#[derive(Clone, Copy)]
enum Arc {
    SourceIn,
    Through,
    ThroughBack,
    Forward(u8),
    Backward(u8),
    ToSink(u8),
    FromSinkBack,
}

/// Vertex-disjoint paths (vertex capacities one) from `sources` into sink
/// classes, using only vertices accepted by `allowed`. Paths end at their
/// first sink vertex. Stops after `limit` paths.
pub(crate) fn vertex_disjoint_flow<F: EdgeField + ?Sized>(
    field: &F,
    sources: &[Vertex],
    classes: &[SinkClass<'_>],
    allowed: impl Fn(Vertex) -> bool,
    limit: usize,
) -> Vec<OpenPath> {
    assert!(classes.len() <= 16);
    let region = field.region();
    let grid = Grid::for_vertices(field);
    let n = grid.len();
    let ok = |v: Vertex| region.contains(v) && allowed(v);
    let mut membership = vec![0u16; n];
    let mut stops = vec![false; n];
    for (c, class) in classes.iter().enumerate() {
        for &t in class.members {
            if let Some(i) = grid.vi(t) {
                membership[i] |= 1 << c;
                stops[i] |= class.terminal;
            }
        }
    }
    let mut is_source = vec![false; n];
    for &s in sources {
        if ok(s) {
            is_source[grid.vi(s).unwrap()] = true;
        }
    }
    let mut through = vec![false; n];
    let mut in_from = vec![NONE; n];
    let mut next = vec![NONE; n];
    let mut used = vec![0usize; classes.len()];
    // Node ids: 2i = in-copy, 2i+1 = out-copy, 2n + c = sink class c.
    let sink_node = |c: usize| 2 * n + c;
    let mut parent: Vec<(usize, Arc)> = vec![(usize::MAX, Arc::Through); 2 * n + classes.len()];
    let mut seen = vec![false; 2 * n + classes.len()];
    let mut count = 0;

    while count < limit {
        seen.iter_mut().for_each(|s| *s = false);
        let mut queue = VecDeque::new();
        let root = usize::MAX - 1;
        for &s in sources {
            let Some(i) = grid.vi(s) else { continue };
            if is_source[i] && in_from[i] == NONE && !seen[2 * i] {
                seen[2 * i] = true;
                parent[2 * i] = (root, Arc::SourceIn);
                queue.push_back(2 * i);
            }
        }
        let mut finish = None;
        'bfs: while let Some(node) = queue.pop_front() {
            macro_rules! push {
                ($to:expr, $arc:expr) => {{
                    let to = $to;
                    if !seen[to] {
                        seen[to] = true;
                        parent[to] = (node, $arc);
                        queue.push_back(to);
                    }
                }};
            }
            if node >= 2 * n {
                let c = node - 2 * n;
                // Reroute one unit already absorbed by this class.
                for t in 0..n {
                    if next[t] == TO_SINK + c as u8 {
                        push!(2 * t + 1, Arc::FromSinkBack);
                    }
                }
                continue;
            }
            let i = node / 2;
            let v = grid.vertex(i);
            if node % 2 == 0 {
                if !through[i] {
                    push!(node + 1, Arc::Through);
                }
                if in_from[i] < 4 {
                    let u = step(v, in_from[i]);
                    push!(2 * grid.vi(u).unwrap() + 1, Arc::Backward(in_from[i]));
                }
            } else {
                if through[i] {
                    push!(node - 1, Arc::ThroughBack);
                }
                let terminal = stops[i];
                for (d, u) in v.neighbors().into_iter().enumerate() {
                    let d = d as u8;
                    if terminal || next[i] == d || !ok(u) || !field.is_open(Edge::between(v, u)) {
                        continue;
                    }
                    push!(2 * grid.vi(u).unwrap(), Arc::Forward(d));
                }
                let m = membership[i];
                for c in 0..classes.len() {
                    if m >> c & 1 == 1 && next[i] != TO_SINK + c as u8 {
                        if used[c] < classes[c].capacity {
                            parent[sink_node(c)] = (node, Arc::ToSink(c as u8));
                            finish = Some(c);
                            break 'bfs;
                        }
                        push!(sink_node(c), Arc::ToSink(c as u8));
                    }
                }
            }
        }
        let Some(c) = finish else { break };
        used[c] += 1;
        // Apply the augmenting path from its end; guarded clears keep the
        // update independent of processing order.
        let mut node = sink_node(c);
        while node != root {
            let (prev, arc) = parent[node];
            match arc {
                Arc::SourceIn => in_from[node / 2] = FROM_SOURCE,
                Arc::Through => through[node / 2] = true,
                Arc::ThroughBack => through[node / 2] = false,
                Arc::Forward(d) => {
                    let (i, j) = (prev / 2, node / 2);
                    next[i] = d;
                    in_from[j] = dir_index(grid.vertex(j), grid.vertex(i));
                }
                Arc::Backward(d) => {
                    // Cancels flow on (node vertex)_out -> (prev vertex)_in.
                    let (j, i) = (prev / 2, node / 2);
                    let back = dir_index(grid.vertex(i), grid.vertex(j));
                    if next[i] == back {
                        next[i] = NONE;
                    }
                    if in_from[j] == d {
                        in_from[j] = NONE;
                    }
                }
                Arc::ToSink(k) => next[prev / 2] = TO_SINK + k,
                Arc::FromSinkBack => {
                    let t = node / 2;
                    let k = (prev - 2 * n) as u8;
                    if next[t] == TO_SINK + k {
                        next[t] = NONE;
                    }
                }
            }
            node = prev;
        }
        count += 1;
    }

    let mut paths = Vec::with_capacity(count);
    for &s in sources {
        let Some(i) = grid.vi(s) else { continue };
        if in_from[i] != FROM_SOURCE {
            continue;
        }
        // Mark so a duplicated source is not decoded twice.
        in_from[i] = NONE;
        let mut walk = vec![s];
        let mut j = i;
        while next[j] < 4 {
            let u = step(grid.vertex(j), next[j]);
            walk.push(u);
            j = grid.vi(u).unwrap();
        }
        paths.push(LatticePath::from_trusted(walk));
    }
    paths
}

fn edge_disjoint_flow<F: EdgeField + ?Sized>(field: &F, sources: &[Vertex], targets: &[Vertex]) -> Vec<OpenPath> {
    let grid = Grid::for_vertices(field);
    let n = grid.len();
    let mut is_source = vec![false; n];
    let mut is_target = vec![false; n];
    for &s in sources {
        is_source[grid.vi(s).unwrap()] = true;
    }
    for &t in targets {
        is_target[grid.vi(t).unwrap()] = true;
    }
    // Net flow along the edge to the east (`h`) and to the north (`v`).
    let mut h = vec![0i8; n];
    let mut vf = vec![0i8; n];
    let flow = |h: &[i8], vf: &[i8], a: Vertex, b: Vertex| -> i8 {
        let e = Edge::between(a, b);
        let k = grid.vi(e.endpoint_a()).unwrap();
        let f = match e.orientation() {
            crate::lattice::Orientation::Horizontal => h[k],
            crate::lattice::Orientation::Vertical => vf[k],
        };
        if e.endpoint_a() == a {
            f
        } else {
            -f
        }
    };
    let mut parent = vec![usize::MAX; n];
    let mut count = 0;
    loop {
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        let mut queue = VecDeque::new();
        for &s in sources {
            let i = grid.vi(s).unwrap();
            if parent[i] == usize::MAX {
                parent[i] = i;
                queue.push_back(i);
            }
        }
        let mut end = None;
        while let Some(i) = queue.pop_front() {
            if is_target[i] {
                end = Some(i);
                break;
            }
            let v = grid.vertex(i);
            for u in v.neighbors() {
                let j = grid.vi(u).unwrap();
                if parent[j] != usize::MAX || !field.is_open(Edge::between(v, u)) || flow(&h, &vf, v, u) >= 1 {
                    continue;
                }
                parent[j] = i;
                queue.push_back(j);
            }
        }
        let Some(mut j) = end else { break };
        while parent[j] != j {
            let i = parent[j];
            let (a, b) = (grid.vertex(i), grid.vertex(j));
            let e = Edge::between(a, b);
            let k = grid.vi(e.endpoint_a()).unwrap();
            let delta = if e.endpoint_a() == a { 1 } else { -1 };
            match e.orientation() {
                crate::lattice::Orientation::Horizontal => h[k] += delta,
                crate::lattice::Orientation::Vertical => vf[k] += delta,
            }
            j = i;
        }
        count += 1;
    }

    // Decompose into walks, then loop-erase.
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut balance = vec![0i32; n];
    for k in 0..n {
        let v = grid.vertex(k);
        for (f, u) in [(h[k], v.offset(1, 0)), (vf[k], v.offset(0, 1))] {
            if f == 0 {
                continue;
            }
            let j = grid.vi(u).unwrap();
            let (from, to) = if f > 0 { (k, j) } else { (j, k) };
            out_arcs[from].push(to);
            balance[from] += 1;
            balance[to] -= 1;
        }
    }
    let mut paths = Vec::with_capacity(count);
    for &s in sources {
        let i = grid.vi(s).unwrap();
        while balance[i] > 0 {
            balance[i] -= 1;
            let mut walk = vec![grid.vertex(i)];
            let mut j = i;
            loop {
                if is_target[j] && balance[j] < 0 {
                    balance[j] += 1;
                    break;
                }
                let to = out_arcs[j].pop().expect("flow conservation");
                walk.push(grid.vertex(to));
                j = to;
            }
            paths.push(LatticePath::from_trusted(loop_erase(&walk)));
        }
    }
    debug_assert_eq!(paths.len(), count);
    paths
}

//! Lowest, topmost and shortest crossings of boxes; innermost and shortest
//! surrounding circuits of annuli.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{signed_area2, vertex_winding};
use crate::lattice::{dual_of, DualVertex, Edge, EdgeField, Orientation, Region, Side, Vertex};
use crate::paths::grid::Grid;
use crate::paths::network::Network;
use crate::paths::{
    closed_dual_path, loop_erase, max_disjoint_open_paths, shortest_open_path, vertex_disjoint_flow, Disjointness,
    DualTarget, LatticePath, OpenPath, SinkClass,
};

/// An open circuit: a closed walk, self-avoiding apart from its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeCircuit {
    // First vertex repeated at the end.
    walk: Vec<Vertex>,
    interior_area: u64,
    winding: Option<i32>,
}

impl LatticeCircuit {
    /// Accepts the cycle with or without the closing repetition.
    pub fn new(mut cycle: Vec<Vertex>) -> Result<Self> {
        if cycle.len() > 1 && cycle.first() == cycle.last() {
            cycle.pop();
        }
        if cycle.len() < 4 {
            return Err(Error::InvalidPath);
        }
        let k = cycle.len();
        if (0..k).any(|i| !cycle[i].is_adjacent(cycle[(i + 1) % k])) {
            return Err(Error::InvalidPath);
        }
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath);
        }
        let interior_area = signed_area2(&cycle).unsigned_abs() / 2;
        let winding = vertex_winding(&cycle, Vertex::ORIGIN).ok();
        cycle.push(cycle[0]);
        Ok(LatticeCircuit { walk: cycle, interior_area, winding })
    }

    /// The closed walk, first vertex repeated at the end.
    pub fn walk(&self) -> &[Vertex] {
        &self.walk
    }

    /// The distinct vertices in circuit order.
    pub fn cycle(&self) -> &[Vertex] {
        &self.walk[..self.walk.len() - 1]
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.walk.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.walk.windows(2).map(|w| Edge::between(w[0], w[1]))
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().any(|f| f == e)
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.cycle().contains(&v)
    }

    /// Number of unit faces enclosed.
    pub fn interior_area(&self) -> u64 {
        self.interior_area
    }

    /// `None` when the circuit passes through the origin.
    pub fn winding_about_origin(&self) -> Option<i32> {
        self.winding
    }

    pub fn surrounds_origin(&self) -> bool {
        matches!(self.winding, Some(w) if w != 0)
    }

    pub fn as_path(&self) -> OpenPath {
        LatticePath::from_trusted(self.walk.clone())
    }

    /// Same circuit traversed the other way.
    pub fn reversed(&self) -> Self {
        let mut walk = self.walk.clone();
        walk.reverse();
        LatticeCircuit { walk, interior_area: self.interior_area, winding: self.winding.map(|w| -w) }
    }

    pub fn is_open_in<F: EdgeField + ?Sized>(&self, field: &F) -> bool {
        self.edges().all(|e| field.is_open(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingResult {
    pub path: Option<OpenPath>,
}

impl CrossingResult {
    pub fn exists(&self) -> bool {
        self.path.is_some()
    }

    /// Edge count, zero when absent.
    pub fn length(&self) -> usize {
        self.path.as_ref().map_or(0, |p| p.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitResult {
    pub circuit: Option<LatticeCircuit>,
}

impl CircuitResult {
    pub fn exists(&self) -> bool {
        self.circuit.is_some()
    }

    pub fn length(&self) -> usize {
        self.circuit.as_ref().map_or(0, |c| c.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremal {
    Lowest,
    Topmost,
}

fn box_size<F: EdgeField + ?Sized>(field: &F) -> Result<i32> {
    let r = field.region();
    if r.is_box() {
        Ok(r.n() as i32)
    } else {
        Err(Error::WrongRegionKind)
    }
}

fn annulus_size<F: EdgeField + ?Sized>(field: &F) -> Result<i32> {
    let r = field.region();
    if r.is_box() {
        Err(Error::WrongRegionKind)
    } else {
        Ok(r.n() as i32)
    }
}

/// Vertices of one side of the box `[-n, n]^2`.
pub fn side_vertices(n: i32, side: Side) -> Vec<Vertex> {
    (-n..=n)
        .map(|t| match side {
            Side::Left => Vertex::new(-n, t),
            Side::Right => Vertex::new(n, t),
            Side::Bottom => Vertex::new(t, -n),
            Side::Top => Vertex::new(t, n),
        })
        .collect()
}

pub fn horizontal_crossing_exists<F: EdgeField + ?Sized>(field: &F) -> Result<bool> {
    let n = box_size(field)?;
    Ok(shortest_open_path(field, &side_vertices(n, Side::Left), &side_vertices(n, Side::Right)).is_some())
}

/// Whether a closed dual path joins the faces below the box to the faces
/// above it, crossing only edges that are not in the vertical sides.
pub fn vertical_closed_dual_crossing_exists<F: EdgeField + ?Sized>(field: &F) -> Result<bool> {
    let n = box_size(field)?;
    Ok(bottom_dual_cluster(field, n).2)
}

/// Faces closed-connected to the row below the box, over the face columns
/// spanning it. Also reports whether the row above the box was reached.
fn bottom_dual_cluster<F: EdgeField + ?Sized>(field: &F, n: i32) -> (Grid, Vec<bool>, bool) {
    let grid = Grid::new(-n - 2, n + 1);
    let mut member = vec![false; grid.len()];
    let mut queue = VecDeque::new();
    for x in -n..n {
        let f = DualVertex::new(x, -n - 1);
        member[grid.fi(f).unwrap()] = true;
        queue.push_back(f);
    }
    let mut top = false;
    while let Some(f) = queue.pop_front() {
        if f.y == n {
            top = true;
            continue;
        }
        for u in f.neighbors() {
            if u.x < -n || u.x >= n || u.y < -n || u.y > n {
                continue;
            }
            let i = grid.fi(u).unwrap();
            if !member[i] && field.is_closed(f.primal_between(u)) {
                member[i] = true;
                queue.push_back(u);
            }
        }
    }
    (grid, member, top)
}

// East, north, west, south.
const HEADINGS: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Face whose center is `v + (a, b) / 2`, for `a, b` in `{-1, 1}`.
fn quadrant(v: Vertex, a: i32, b: i32) -> DualVertex {
    DualVertex::new(v.x + (a - 1) / 2, v.y + (b - 1) / 2)
}

/// Walks along lattice edges keeping the face set `inside` on the right,
/// hugging it as tightly as possible. `visit` sees each vertex reached with
/// the heading it arrived on; returning `false` stops the walk.
fn wall_follow(
    start: Vertex,
    mut heading: usize,
    inside: impl Fn(DualVertex) -> bool,
    mut visit: impl FnMut(Vertex, usize) -> bool,
) {
    let mut v = start;
    loop {
        let (dx, dy) = HEADINGS[heading];
        let front_right = quadrant(v, dx + dy, dy - dx);
        let front_left = quadrant(v, dx - dy, dy + dx);
        heading = if !inside(front_right) {
            (heading + 3) % 4
        } else if !inside(front_left) {
            heading
        } else {
            (heading + 1) % 4
        };
        let (dx, dy) = HEADINGS[heading];
        v = v.offset(dx, dy);
        if !visit(v, heading) {
            return;
        }
    }
}

fn lowest_crossing<F: EdgeField + ?Sized>(field: &F, n: i32) -> Option<OpenPath> {
    let (grid, member, top) = bottom_dual_cluster(field, n);
    if top {
        return None;
    }
    let inside = |f: DualVertex| (-n..n).contains(&f.x) && grid.fi(f).is_some_and(|i| member[i]);
    let start = Vertex::new(-n, -n);
    let mut walk = vec![start];
    let limit = 4 * grid.len() + 8;
    wall_follow(start, 1, inside, |v, _| {
        walk.push(v);
        assert!(walk.len() <= limit, "boundary walk did not reach the right side");
        v.x != n
    });
    let begin = walk.iter().rposition(|v| v.x == -n).unwrap();
    Some(LatticePath::from_trusted(loop_erase(&walk[begin..])))
}

fn reflect(e: Edge) -> Edge {
    let a = e.endpoint_a();
    match e.orientation() {
        Orientation::Horizontal => Edge::horizontal(Vertex::new(a.x, -a.y)),
        Orientation::Vertical => Edge::vertical(Vertex::new(a.x, -a.y - 1)),
    }
}

/// A box configuration mirrored in the horizontal axis.
struct Reflected<'a, F: ?Sized>(&'a F);

impl<F: EdgeField + ?Sized> EdgeField for Reflected<'_, F> {
    fn region(&self) -> Region {
        self.0.region()
    }
    fn is_open_index(&self, index: usize) -> bool {
        let e = self.0.region().edge_at(index).unwrap();
        self.0.is_open(reflect(e))
    }
    fn is_open(&self, e: Edge) -> bool {
        self.0.is_open(reflect(e))
    }
    fn is_closed(&self, e: Edge) -> bool {
        self.0.is_closed(reflect(e))
    }
}

/// The lowest or topmost open left-right crossing of a box.
///
/// A crossing starts on the left side, ends on the right side and has no
/// other vertex on either vertical side.
pub fn extremal_crossing<F: EdgeField + ?Sized>(field: &F, which: Extremal) -> Result<CrossingResult> {
    let n = box_size(field)?;
    let path = match which {
        Extremal::Lowest => lowest_crossing(field, n),
        Extremal::Topmost => lowest_crossing(&Reflected(field), n)
            .map(|p| LatticePath::from_trusted(p.vertices().iter().map(|v| Vertex::new(v.x, -v.y)).collect())),
    };
    Ok(CrossingResult { path })
}

/// Per-edge test without any path tracing: `e` is open, its endpoints reach
/// the left and right sides by vertex-disjoint open paths, and its dual edge
/// reaches the bottom (top) by a closed dual path.
pub fn on_extremal_crossing_by_arms<F: EdgeField + ?Sized>(field: &F, e: Edge, which: Extremal) -> Result<bool> {
    let n = box_size(field)?;
    if !field.region().contains_edge(e) {
        return Err(Error::OutsideRegion);
    }
    let side_column = e.orientation() == Orientation::Vertical && e.endpoint_a().x.abs() == n;
    if !field.is_open(e) || side_column {
        return Ok(false);
    }
    let side = match which {
        Extremal::Lowest => Side::Bottom,
        Extremal::Topmost => Side::Top,
    };
    if closed_dual_path(field, dual_of(e), DualTarget::Side(side))?.is_none() {
        return Ok(false);
    }
    let left = side_vertices(n, Side::Left);
    let right = side_vertices(n, Side::Right);
    let classes = [
        SinkClass { members: &left, capacity: 1, terminal: true },
        SinkClass { members: &right, capacity: 1, terminal: true },
    ];
    // Either pairing of endpoints with sides yields a crossing through `e`.
    Ok(vertex_disjoint_flow(field, &e.endpoints(), &classes, |_| true, 2).len() == 2)
}

pub fn shortest_crossing<F: EdgeField + ?Sized>(field: &F) -> Result<CrossingResult> {
    let n = box_size(field)?;
    Ok(CrossingResult { path: shortest_open_path(field, &side_vertices(n, Side::Left), &side_vertices(n, Side::Right)) })
}

/// Vertex-disjoint Menger count between the two vertical sides.
pub fn max_disjoint_crossings<F: EdgeField + ?Sized>(field: &F) -> Result<usize> {
    let n = box_size(field)?;
    let left = side_vertices(n, Side::Left);
    let right = side_vertices(n, Side::Right);
    Ok(max_disjoint_open_paths(field, &left, &right, Disjointness::Vertex)?.count)
}

/// Splits a closed walk into simple loops and returns the first one that
/// winds around the origin.
fn winding_loop(walk: &[Vertex]) -> Option<LatticeCircuit> {
    let mut stack: Vec<Vertex> = Vec::new();
    for &v in walk {
        if let Some(i) = stack.iter().rposition(|u| *u == v) {
            let cycle: Vec<Vertex> = stack.drain(i + 1..).collect();
            if cycle.len() >= 3 {
                let mut full = vec![v];
                full.extend(cycle);
                if let Ok(c) = LatticeCircuit::new(full) {
                    if c.surrounds_origin() {
                        return Some(c);
                    }
                }
            }
        } else {
            stack.push(v);
        }
    }
    None
}

fn counter_clockwise(c: LatticeCircuit) -> LatticeCircuit {
    if c.winding_about_origin() == Some(-1) {
        c.reversed()
    } else {
        c
    }
}

/// Faces strictly inside the ring of vertices at distance `n + 1`.
fn in_hole(n: i32, f: DualVertex) -> bool {
    (-n - 1..=n).contains(&f.x) && (-n - 1..=n).contains(&f.y)
}

/// Whether some open circuit surrounds the hole, decided without tracing it.
///
/// Equivalent to `innermost_circuit(field)?.exists()`. A depth-first search
/// for a closed dual path from the hole to the outside usually escapes long
/// before the breadth-first growth would, which makes this the cheap way to
/// reject configurations.
pub fn circuit_exists<F: EdgeField + ?Sized>(field: &F) -> Result<bool> {
    let n = annulus_size(field)?;
    let outer = 3 * n;
    let grid = Grid::for_faces(field);
    let mut member = vec![false; grid.len()];
    let mut stack = Vec::new();
    for i in 0..grid.len() {
        let f = grid.face(i);
        if in_hole(n, f) {
            member[i] = true;
            if f.x == -n - 1 || f.x == n || f.y == -n - 1 || f.y == n {
                stack.push(f);
            }
        }
    }
    while let Some(f) = stack.pop() {
        if f.norm_inf2() > 2 * outer as u64 {
            return Ok(false);
        }
        for u in f.neighbors() {
            let Some(j) = grid.fi(u) else { continue };
            if !member[j] && field.is_closed(f.primal_between(u)) {
                member[j] = true;
                stack.push(u);
            }
        }
    }
    Ok(true)
}

/// The open circuit surrounding the hole whose interior is smallest.
///
/// Grows the hole by every closed dual cluster touching it and traces the
/// outer boundary of the result.
pub fn innermost_circuit<F: EdgeField + ?Sized>(field: &F) -> Result<CircuitResult> {
    let n = annulus_size(field)?;
    let outer = 3 * n;
    let grid = Grid::for_faces(field);
    let mut member = vec![false; grid.len()];
    let mut queue = VecDeque::new();
    for i in 0..grid.len() {
        if in_hole(n, grid.face(i)) {
            member[i] = true;
            queue.push_back(grid.face(i));
        }
    }
    while let Some(f) = queue.pop_front() {
        if f.norm_inf2() > 2 * outer as u64 {
            return Ok(CircuitResult { circuit: None });
        }
        for u in f.neighbors() {
            let Some(j) = grid.fi(u) else { continue };
            if !member[j] && field.is_closed(f.primal_between(u)) {
                member[j] = true;
                queue.push_back(u);
            }
        }
    }
    let inside = |f: DualVertex| grid.fi(f).is_some_and(|i| member[i]);
    let fx = (0..=outer).rev().find(|&x| inside(DualVertex::new(x, 0))).unwrap();
    // The edge east of the last member face on row 0 is on the outer boundary.
    let start = Vertex::new(fx + 1, 0);
    let mut walk = vec![start];
    wall_follow(start, 3, inside, |v, h| {
        walk.push(v);
        !(v == start && h == 3)
    });
    let circuit = winding_loop(&walk).expect("outer boundary surrounds the hole");
    debug_assert!(circuit.is_open_in(field));
    Ok(CircuitResult { circuit: Some(counter_clockwise(circuit)) })
}

/// Per-edge test independent of the boundary trace: `e*` is joined to the
/// hole by closed dual edges, and `e` lies on some open circuit surrounding
/// the hole.
pub fn on_innermost_circuit_by_arms<F: EdgeField + ?Sized>(field: &F, e: Edge) -> Result<bool> {
    InnermostTest::new(field)?.contains(e)
}

/// All edges passing [`on_innermost_circuit_by_arms`], sharing one face
/// decomposition.
pub fn innermost_characterization<F: EdgeField + ?Sized>(field: &F) -> Result<Vec<Edge>> {
    let test = InnermostTest::new(field)?;
    let mut out = Vec::new();
    for e in field.region().edges() {
        if test.contains(e)? {
            out.push(e);
        }
    }
    Ok(out)
}

/// The surrounding-circuit condition is decided in the planar dual of the
/// open subgraph: faces joined across non-open edges are merged, and `e`
/// lies on a surrounding open circuit exactly when the two merged faces
/// beside it reach the hole class and the unbounded class by
/// vertex-disjoint paths.
struct InnermostTest<'a, F: ?Sized> {
    field: &'a F,
    grid: Grid,
    // Dense class id of every face.
    class: Vec<usize>,
    classes: usize,
    // Class pairs across open edges.
    links: Vec<(usize, usize)>,
    hole: usize,
    unbounded: usize,
}

impl<'a, F: EdgeField + ?Sized> InnermostTest<'a, F> {
    fn new(field: &'a F) -> Result<Self> {
        annulus_size(field)?;
        let grid = Grid::for_faces(field);
        let mut root: Vec<usize> = (0..grid.len()).collect();
        fn find(root: &mut [usize], mut i: usize) -> usize {
            while root[i] != i {
                root[i] = root[root[i]];
                i = root[i];
            }
            i
        }
        let mut open_duals = Vec::new();
        for i in 0..grid.len() {
            let f = grid.face(i);
            for u in [DualVertex::new(f.x + 1, f.y), DualVertex::new(f.x, f.y + 1)] {
                let Some(j) = grid.fi(u) else { continue };
                if field.is_open(f.primal_between(u)) {
                    open_duals.push((i, j));
                } else {
                    let (a, b) = (find(&mut root, i), find(&mut root, j));
                    root[a.max(b)] = a.min(b);
                }
            }
        }
        let mut ids = vec![usize::MAX; grid.len()];
        let mut class = vec![0; grid.len()];
        let mut classes = 0;
        for i in 0..grid.len() {
            let r = find(&mut root, i);
            if ids[r] == usize::MAX {
                ids[r] = classes;
                classes += 1;
            }
            class[i] = ids[r];
        }
        let mut links: Vec<(usize, usize)> =
            open_duals.into_iter().map(|(i, j)| (class[i], class[j])).filter(|(a, b)| a != b).collect();
        links.sort_unstable();
        links.dedup();
        let hole = class[grid.fi(DualVertex::new(0, 0)).unwrap()];
        let unbounded = class[0];
        Ok(InnermostTest { field, grid, class, classes, links, hole, unbounded })
    }

    fn contains(&self, e: Edge) -> Result<bool> {
        if !self.field.region().contains_edge(e) {
            return Err(Error::OutsideRegion);
        }
        if !self.field.is_open(e) || self.hole == self.unbounded {
            return Ok(false);
        }
        let [x, y] = dual_of(e).endpoints().map(|f| self.class[self.grid.fi(f).unwrap()]);
        if x == y || (x != self.hole && y != self.hole) {
            return Ok(false);
        }
        // Node-split network over the classes.
        let count = self.classes;
        let mut net = Network::new(2 * count + 2);
        let (source, sink) = (2 * count, 2 * count + 1);
        for c in 0..count {
            net.add_arc(2 * c, 2 * c + 1, 1, 0);
        }
        for &(a, b) in &self.links {
            net.add_arc(2 * a + 1, 2 * b, 1, 0);
            net.add_arc(2 * b + 1, 2 * a, 1, 0);
        }
        net.add_arc(source, 2 * x, 1, 0);
        net.add_arc(source, 2 * y, 1, 0);
        net.add_arc(2 * self.hole + 1, sink, 1, 0);
        net.add_arc(2 * self.unbounded + 1, sink, 1, 0);
        Ok(net.max_flow(source, sink, 2) == 2)
    }
}

/// The shortest open circuit surrounding the hole.
///
/// Searches the cover of the annulus cut along the vertical edges
/// `{(x, 0), (x, 1)}` with `x > n`; crossing one upwards moves to the next
/// sheet. A closed walk of winding one through a cut vertex lifts to a path
/// between consecutive sheets.
pub fn shortest_enclosing_circuit<F: EdgeField + ?Sized>(field: &F) -> Result<CircuitResult> {
    let n = annulus_size(field)?;
    let region = field.region();
    let grid = Grid::for_vertices(field);
    // Sheet index k stands for winding k - 1.
    const SHEETS: usize = 4;
    let state = |v: Vertex, k: usize| grid.vi(v).unwrap() * SHEETS + k;
    let mut dist = vec![u32::MAX; grid.len() * SHEETS];
    let mut parent = vec![usize::MAX; grid.len() * SHEETS];
    let mut touched: Vec<usize> = Vec::new();
    let mut best: Option<(u32, Vec<Vertex>)> = None;
    for x0 in n + 1..=3 * n {
        let base = Vertex::new(x0, 0);
        if !field.is_open(Edge::vertical(base)) {
            continue;
        }
        for &s in &touched {
            dist[s] = u32::MAX;
        }
        touched.clear();
        let (s0, goal) = (state(base, 1), state(base, 2));
        dist[s0] = 0;
        touched.push(s0);
        let mut queue = VecDeque::from([(base, 1usize)]);
        let bound = best.as_ref().map_or(u32::MAX, |b| b.0);
        let mut found = false;
        'bfs: while let Some((v, k)) = queue.pop_front() {
            let d = dist[state(v, k)];
            if d + 1 >= bound {
                break;
            }
            for u in v.neighbors() {
                if !region.contains(u) || !field.is_open(Edge::between(v, u)) {
                    continue;
                }
                let cut = v.x > n && v.x == u.x && v.y.min(u.y) == 0;
                let k2 = match (cut, u.y > v.y) {
                    (false, _) => k,
                    (true, true) => k + 1,
                    (true, false) => k.wrapping_sub(1),
                };
                if k2 >= SHEETS {
                    continue;
                }
                let t = state(u, k2);
                if dist[t] != u32::MAX {
                    continue;
                }
                dist[t] = d + 1;
                parent[t] = state(v, k);
                touched.push(t);
                if t == goal {
                    found = true;
                    break 'bfs;
                }
                queue.push_back((u, k2));
            }
        }
        if found {
            let mut walk = vec![base];
            let mut s = goal;
            while s != s0 {
                s = parent[s];
                walk.push(grid.vertex(s / SHEETS));
            }
            walk.reverse();
            best = Some((dist[goal], walk));
        }
    }
    let circuit = best.map(|(_, walk)| counter_clockwise(winding_loop(&walk).expect("walk of winding one")));
    Ok(CircuitResult { circuit })
}

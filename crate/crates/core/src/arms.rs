//! Arm events: disjoint open paths and closed dual paths leaving an edge, a
//! vertex or an inner box and reaching a prescribed boundary.
//!
//! Distances are measured in doubled coordinates so that vertex, edge-midpoint
//! and face-centre positions are all integers. A path "reaches" a boundary
//! when it arrives at a site lying on or just past it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{dual_of, DualVertex, Edge, EdgeField, Rect, Region, Vertex};
use crate::paths::grid::Grid;
use crate::paths::network::Network;
use crate::paths::{closed_bfs, vertex_disjoint_flow, SinkClass};

/// Where the closed arm of a three-arm event may land.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Landing {
    /// Anywhere on the boundary of the box.
    #[default]
    Anywhere,
    /// Only on the middle third of the bottom side.
    BottomMiddleThird,
}

fn doubled_gap(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn twice(v: Vertex) -> (i64, i64) {
    (2 * v.x as i64, 2 * v.y as i64)
}

/// Whether every vertex of `r` lies in `region`.
fn rect_inside(region: Region, r: Rect) -> bool {
    let big = region.outer_radius();
    let outer = r.x_min >= -big && r.x_max <= big && r.y_min >= -big && r.y_max <= big;
    let hole = region.hole_radius().map_or(true, |h| r.x_max < -h || r.x_min > h || r.y_max < -h || r.y_min > h);
    outer && hole && !r.is_empty()
}

/// Whether the ring of vertices with sup-norm in `[m, n]` lies in `region`.
fn ring_inside(region: Region, m: u32, n: u32) -> bool {
    n as i32 <= region.outer_radius() && region.hole_radius().map_or(true, |h| (h as u32) < m)
}

fn closed_arm<F: EdgeField + ?Sized>(
    field: &F,
    starts: &[DualVertex],
    allowed: impl Fn(DualVertex) -> bool,
    target: impl Fn(DualVertex) -> bool,
) -> bool {
    let grid = Grid::for_faces(field);
    closed_bfs(field, &grid, starts, allowed, target).is_some()
}

fn open_arms<F: EdgeField + ?Sized>(
    field: &F,
    sources: &[Vertex],
    targets: &[Vertex],
    allowed: impl Fn(Vertex) -> bool,
    count: usize,
) -> bool {
    let class = [SinkClass { members: targets, capacity: count, terminal: true }];
    vertex_disjoint_flow(field, sources, &class, allowed, count).len() == count
}

/// Vertices of the boundary of a rectangle.
fn rect_boundary(r: Rect) -> Vec<Vertex> {
    r.vertices()
        .filter(|v| v.x == r.x_min || v.x == r.x_max || v.y == r.y_min || v.y == r.y_max)
        .collect()
}

fn ring(r: u32) -> Vec<Vertex> {
    rect_boundary(Rect::centered(r as i32))
}

/// Vertex rectangle of the box of radius `m` around an edge: every vertex
/// within sup-distance `m + 1/2` of the edge's midpoint.
fn edge_box(e: Edge, m: u32) -> Rect {
    let (cx, cy) = e.midpoint2();
    let reach = 2 * m as i64 + 1;
    let lo = |c: i64| (c - reach + 1).div_euclid(2) as i32;
    let hi = |c: i64| (c + reach).div_euclid(2) as i32;
    Rect::new(lo(cx), hi(cx), lo(cy), hi(cy))
}

/// Three-arm event around an edge, with the arms confined by `keep_vertex`
/// and `keep_face` on top of the box.
fn three_arm_in<F: EdgeField + ?Sized>(
    field: &F,
    e: Edge,
    m: u32,
    landing: Landing,
    keep_vertex: impl Fn(Vertex) -> bool,
    keep_face: impl Fn(DualVertex) -> bool,
) -> Result<bool> {
    let frame = edge_box(e, m);
    if !rect_inside(field.region(), frame) {
        return Err(Error::RadiusOverflow);
    }
    let c = e.midpoint2();
    let m2 = 2 * m as i64;
    let starts: Vec<DualVertex> = dual_of(e).endpoints().into_iter().filter(|f| keep_face(*f)).collect();
    let inside = |f: DualVertex| keep_face(f) && doubled_gap(f.center2(), c) < m2;
    let lands = |f: DualVertex| {
        let p = f.center2();
        if !keep_face(f) || doubled_gap(p, c) < m2 {
            return false;
        }
        match landing {
            Landing::Anywhere => true,
            Landing::BottomMiddleThird => c.1 - p.1 >= m2 && 3 * (p.0 - c.0).abs() <= m2,
        }
    };
    if !closed_arm(field, &starts, inside, lands) {
        return Ok(false);
    }
    let targets: Vec<Vertex> =
        rect_boundary(frame).into_iter().filter(|v| keep_vertex(*v) && doubled_gap(twice(*v), c) >= m2).collect();
    Ok(open_arms(field, &e.endpoints(), &targets, |v| frame.contains(v) && keep_vertex(v), 2))
}

/// Whether both endpoints of `e` have vertex-disjoint open paths to the
/// boundary of the radius-`m` box around `e`, and a face of `e` has a closed
/// dual path to that boundary. The edge's own state is irrelevant; radius 0
/// is vacuous.
pub fn three_arm_at_edge<F: EdgeField + ?Sized>(field: &F, e: Edge, m: u32) -> Result<bool> {
    three_arm_at_edge_landing(field, e, m, Landing::Anywhere)
}

/// [`three_arm_at_edge`] with a restricted landing zone for the closed arm.
pub fn three_arm_at_edge_landing<F: EdgeField + ?Sized>(field: &F, e: Edge, m: u32, landing: Landing) -> Result<bool> {
    if !field.region().contains_edge(e) {
        return Err(Error::OutsideRegion);
    }
    three_arm_in(field, e, m, landing, |_| true, |_| true)
}

/// The edge from the origin to `(1, 0)`.
pub fn reference_edge() -> Edge {
    Edge::horizontal(Vertex::ORIGIN)
}

/// Three arms from the reference edge within the upper half-plane `y >= 0`.
/// The closed arm starts from the face above the edge.
pub fn half_plane_three_arm<F: EdgeField + ?Sized>(field: &F, n: u32) -> Result<bool> {
    three_arm_in(field, reference_edge(), n, Landing::Anywhere, |v| v.y >= 0, |f| f.y >= 0)
}

/// Two vertex-disjoint open crossings and one closed dual crossing of the
/// ring between the boxes of radii `m` and `n`. Equal radii give a vacuous
/// event.
pub fn annulus_three_arm<F: EdgeField + ?Sized>(field: &F, m: u32, n: u32) -> Result<bool> {
    if m == n {
        return Ok(true);
    }
    check_ring(field, m, n)?;
    let (lo, hi) = (2 * m as u64, 2 * n as u64);
    let starts: Vec<DualVertex> = ring_faces(m);
    let closed = closed_arm(
        field,
        &starts,
        |f| (lo - 1..hi).contains(&f.norm_inf2()),
        |f| f.norm_inf2() == hi + 1,
    );
    Ok(closed && open_arms(field, &ring(m), &ring(n), |v| (m..=n).contains(&v.norm_inf()), 2))
}

fn check_ring<F: EdgeField + ?Sized>(field: &F, m: u32, n: u32) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::InvalidGeometry);
    }
    if !ring_inside(field.region(), m, n) {
        return Err(Error::RadiusOverflow);
    }
    Ok(())
}

/// Faces just inside the box of radius `m`.
fn ring_faces(m: u32) -> Vec<DualVertex> {
    let m = m as i32;
    (-m..m)
        .flat_map(|x| (-m..m).map(move |y| DualVertex::new(x, y)))
        .filter(|f| f.norm_inf2() == 2 * m as u64 - 1)
        .collect()
}

/// Three vertex-disjoint open crossings and three vertex-disjoint dual
/// crossings of the ring between radii `m` and `n`, where the dual crossings
/// together cross at most `budget` open edges.
pub fn six_arm_annulus<F: EdgeField + ?Sized>(field: &F, m: u32, n: u32, budget: u32) -> Result<bool> {
    if m == n {
        return Ok(true);
    }
    check_ring(field, m, n)?;
    if !open_arms(field, &ring(m), &ring(n), |v| (m..=n).contains(&v.norm_inf()), 3) {
        return Ok(false);
    }
    let region = field.region();
    let (lo, hi) = (2 * m as u64 - 1, 2 * n as u64 + 1);
    let grid = Grid::new(-(n as i32) - 1, n as i32);
    let member = |f: DualVertex| (lo..=hi).contains(&f.norm_inf2());
    // Node 2i enters face i, node 2i + 1 leaves it.
    let mut net = Network::new(2 * grid.len() + 2);
    let (s, t) = (2 * grid.len(), 2 * grid.len() + 1);
    for i in 0..grid.len() {
        let f = grid.face(i);
        if !member(f) {
            continue;
        }
        net.add_arc(2 * i, 2 * i + 1, 1, 0);
        if f.norm_inf2() == lo {
            net.add_arc(s, 2 * i, 1, 0);
        }
        if f.norm_inf2() == hi {
            net.add_arc(2 * i + 1, t, 1, 0);
            continue;
        }
        for u in f.neighbors() {
            let e = f.primal_between(u);
            if let Some(j) = grid.fi(u).filter(|_| member(u) && region.contains_edge(e)) {
                net.add_arc(2 * i + 1, 2 * j, 1, i64::from(field.is_open(e)));
            }
        }
    }
    let (flow, cost) = net.min_cost_flow(s, t, 3);
    Ok(flow == 3 && cost <= budget as i64)
}

/// Whether the origin is joined to the boundary of the radius-`n` box by an
/// open path inside it.
pub fn one_arm<F: EdgeField + ?Sized>(field: &F, n: u32) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    if !rect_inside(field.region(), Rect::centered(n as i32)) {
        return Err(Error::RadiusOverflow);
    }
    Ok(open_arms(field, &[Vertex::ORIGIN], &ring(n), |v| v.norm_inf() <= n, 1))
}

/// Landing zones for five-arm points inside a rectangular frame. Arms going
/// right, left and down may land anywhere on the matching side; the two
/// upward arms land on prescribed stretches of the top side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiveArmZones {
    pub frame: Rect,
    /// Inclusive x-range on the top side for the closed arm leaving north-west.
    pub closed_top: (i32, i32),
    /// Inclusive x-range on the top side for the open arm leaving north.
    pub open_top: (i32, i32),
}

impl FiveArmZones {
    /// Frame `[-n, n]^2`, closed arm to the left half of the top side, open
    /// arm to the right half.
    pub fn centered(n: u32) -> Self {
        let n = n as i32;
        FiveArmZones { frame: Rect::centered(n), closed_top: (-n, 0), open_top: (0, n) }
    }

    fn validate(&self, region: Region) -> Result<()> {
        let f = self.frame;
        let fits = |(a, b): (i32, i32)| f.x_min <= a && a <= b && b <= f.x_max;
        if f.x_min >= f.x_max || f.y_min >= f.y_max || !fits(self.closed_top) || !fits(self.open_top) {
            return Err(Error::InvalidGeometry);
        }
        if !rect_inside(region, f) {
            return Err(Error::RadiusOverflow);
        }
        Ok(())
    }

    fn face_inside(&self, g: DualVertex) -> bool {
        let f = self.frame;
        (f.x_min..f.x_max).contains(&g.x) && (f.y_min..f.y_max).contains(&g.y)
    }
}

/// Whether `w` is a five-arm point of the frame: a closed arm from the dual
/// of `{w + (-1, 1), w + (0, 1)}` to the closed zone of the top side, open
/// arms from `{w, w + (0, 1)}` to the open zone of the top side and from
/// `{w, w + (1, 0)}` to the right side, a closed arm from the dual of
/// `{w + (-1, -1), w + (0, -1)}` to the bottom side and an open arm from
/// `{w - (1, 0), w}` to the left side. Open arms are vertex-disjoint and stay
/// inside the frame, as do the faces used by closed arms.
pub fn five_arm_point<F: EdgeField + ?Sized>(field: &F, w: Vertex, zones: &FiveArmZones) -> Result<bool> {
    zones.validate(field.region())?;
    Ok(zones.frame.contains(w) && five_arm_unchecked(field, w, zones))
}

fn five_arm_unchecked<F: EdgeField + ?Sized>(field: &F, w: Vertex, zones: &FiveArmZones) -> bool {
    let at = |dx: i32, dy: i32| Vertex::new(w.x + dx, w.y + dy);
    let open = |a: Vertex, b: Vertex| Edge::new(a, b).is_ok_and(|e| field.is_open(e));
    let closed = |a: Vertex, b: Vertex| Edge::new(a, b).is_ok_and(|e| field.is_closed(e));
    // Incident edges first: they reject almost every vertex.
    if !(open(w, at(0, 1)) && open(w, at(1, 0)) && open(at(-1, 0), w)) {
        return false;
    }
    if !(closed(at(-1, 1), at(0, 1)) && closed(at(-1, -1), at(0, -1))) {
        return false;
    }
    let f = zones.frame;
    let inside = |g: DualVertex| zones.face_inside(g);
    let (a1, b1) = zones.closed_top;
    let north = [DualVertex::new(w.x - 1, w.y), DualVertex::new(w.x - 1, w.y + 1)];
    if !closed_arm(field, &north, inside, |g| g.y == f.y_max && a1 <= g.x && g.x < b1) {
        return false;
    }
    let south = [DualVertex::new(w.x - 1, w.y - 1), DualVertex::new(w.x - 1, w.y - 2)];
    if !closed_arm(field, &south, inside, |g| g.y == f.y_min - 1 && (f.x_min..f.x_max).contains(&g.x)) {
        return false;
    }
    let usable = |v: Vertex| f.contains(v) && v != w;
    let left: Vec<Vertex> = (f.y_min..=f.y_max).map(|y| Vertex::new(f.x_min, y)).collect();
    if !open_arms(field, &[at(-1, 0)], &left, usable, 1) {
        return false;
    }
    // Arms may brush other parts of the boundary before landing, so sinks are
    // not terminal. West of w the closed arms and the dual of {w - e1, w}
    // form a barrier, and by planarity any two disjoint arms are then paired
    // correctly unless one of them lands on the top-right corner, which
    // belongs to both zones. Dropping the corner from one zone at a time
    // covers both cases.
    let corner = Vertex::new(f.x_max, f.y_max);
    let top: Vec<Vertex> = (zones.open_top.0..=zones.open_top.1).map(|x| Vertex::new(x, f.y_max)).collect();
    let right: Vec<Vertex> = (f.y_min..=f.y_max).map(|y| Vertex::new(f.x_max, y)).collect();
    let without = |zone: &[Vertex]| -> Vec<Vertex> { zone.iter().copied().filter(|v| *v != corner).collect() };
    let sources = [at(0, 1), at(1, 0)];
    let pair = |up: &[Vertex], side: &[Vertex]| {
        let classes = [
            SinkClass { members: up, capacity: 1, terminal: false },
            SinkClass { members: side, capacity: 1, terminal: false },
        ];
        vertex_disjoint_flow(field, &sources, &classes, usable, 2).len() == 2
    };
    pair(&top, &without(&right)) || pair(&without(&top), &right)
}

/// The lexicographically least five-arm point inside `search`, if any.
pub fn five_arm_point_search<F: EdgeField + ?Sized>(
    field: &F,
    search: Rect,
    zones: &FiveArmZones,
) -> Result<Option<Vertex>> {
    zones.validate(field.region())?;
    let f = zones.frame;
    let nested = f.x_min <= search.x_min && search.x_max <= f.x_max && f.y_min <= search.y_min && search.y_max <= f.y_max;
    if !nested {
        return Err(Error::InvalidGeometry);
    }
    Ok(search.vertices().find(|w| five_arm_unchecked(field, *w, zones)))
}

/// The fixed menu of arm events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArmPattern {
    /// Three arms from the reference edge to distance `n`.
    ThreeArmEdge,
    /// Three arms across the ring between radii `m` and `n`.
    ThreeArmAnnulus,
    /// The origin is a five-arm point of `[-n, n]^2`.
    FiveArmPoint,
    /// Three arms from the reference edge in the upper half-plane.
    ThreeArmHalfPlane,
    /// Six arms across the ring between radii `m` and `n`, with defects.
    SixArmAnnulus,
    /// One open arm from the origin to distance `n`.
    OneArm,
}

impl ArmPattern {
    pub const ALL: [ArmPattern; 6] = [
        ArmPattern::ThreeArmEdge,
        ArmPattern::ThreeArmAnnulus,
        ArmPattern::FiveArmPoint,
        ArmPattern::ThreeArmHalfPlane,
        ArmPattern::SixArmAnnulus,
        ArmPattern::OneArm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ArmPattern::ThreeArmEdge => "a3_edge",
            ArmPattern::ThreeArmAnnulus => "a3_annulus",
            ArmPattern::FiveArmPoint => "a5_point",
            ArmPattern::ThreeArmHalfPlane => "a3_halfplane",
            ArmPattern::SixArmAnnulus => "a6_annulus",
            ArmPattern::OneArm => "a1_point",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        ArmPattern::ALL.into_iter().find(|p| p.name() == name)
    }

    fn uses_inner_radius(self) -> bool {
        matches!(self, ArmPattern::ThreeArmAnnulus | ArmPattern::SixArmAnnulus)
    }
}

/// An arm event with its radii. Single-scale patterns use only the outer
/// radius and require the inner one to be zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArmSpec {
    pattern: ArmPattern,
    inner: u32,
    outer: u32,
    defect_budget: u32,
}

impl ArmSpec {
    pub fn new(pattern: ArmPattern, inner: u32, outer: u32, defect_budget: u32) -> Result<Self> {
        let radii_ok = if pattern.uses_inner_radius() {
            inner <= outer && (inner >= 1 || outer == 0)
        } else {
            inner == 0
        };
        let budget_ok = defect_budget == 0 || pattern == ArmPattern::SixArmAnnulus;
        if !radii_ok || !budget_ok || outer > 1 << 20 {
            return Err(Error::InvalidGeometry);
        }
        Ok(ArmSpec { pattern, inner, outer, defect_budget })
    }

    /// Single-scale event at radius `n`.
    pub fn at(pattern: ArmPattern, n: u32) -> Result<Self> {
        ArmSpec::new(pattern, 0, n, 0)
    }

    pub fn pattern(&self) -> ArmPattern {
        self.pattern
    }

    pub fn inner(&self) -> u32 {
        self.inner
    }

    pub fn outer(&self) -> u32 {
        self.outer
    }

    pub fn defect_budget(&self) -> u32 {
        self.defect_budget
    }

    /// Smallest box on which the event is decided.
    pub fn region(&self) -> Region {
        let edge_centred = matches!(self.pattern, ArmPattern::ThreeArmEdge | ArmPattern::ThreeArmHalfPlane);
        let n = if edge_centred { self.outer + 1 } else { self.outer.max(1) };
        Region::square(n).expect("radius was validated")
    }

    pub fn occurs<F: EdgeField + ?Sized>(&self, field: &F) -> Result<bool> {
        let (m, n) = (self.inner, self.outer);
        match self.pattern {
            ArmPattern::ThreeArmEdge => three_arm_at_edge(field, reference_edge(), n),
            ArmPattern::ThreeArmAnnulus => annulus_three_arm(field, m, n),
            ArmPattern::ThreeArmHalfPlane => half_plane_three_arm(field, n),
            ArmPattern::SixArmAnnulus => six_arm_annulus(field, m, n, self.defect_budget),
            ArmPattern::OneArm => one_arm(field, n),
            ArmPattern::FiveArmPoint => {
                if n == 0 {
                    return Err(Error::InvalidGeometry);
                }
                five_arm_point(field, Vertex::ORIGIN, &FiveArmZones::centered(n))
            }
        }
    }
}

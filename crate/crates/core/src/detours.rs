//! Shielded detours around an open circuit: short open bypasses through the
//! circuit's exterior that are covered by a closed dual path, the maximal
//! disjoint family they form and the shortcut circuit built from it.
//!
//! All tests of "surrounds the origin" are exact winding computations.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::crossings::LatticeCircuit;
use crate::error::{Error, Result};
use crate::geometry::{vertex_winding, winding_number, FaceInterior, RationalPoint};
use crate::lattice::{DualVertex, Edge, EdgeField, Region, Vertex};
use crate::paths::grid::{descend_lex, open_distances, Grid, UNSEEN};
use crate::paths::{DualPath, LatticePath, OpenPath};

/// A tolerance in `(0, 1)`, held as a reduced fraction so that length
/// comparisons are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || num >= den {
            return Err(Error::InvalidEpsilon);
        }
        let g = gcd(num, den);
        Ok(Epsilon { num: num / g, den: den / g })
    }

    /// Rounds to nine decimal places, so `0.3` becomes exactly `3/10`.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidEpsilon);
        }
        let scale = 1_000_000_000u64;
        let num = (x * scale as f64 + 0.5) as u64;
        Epsilon::new(num, scale)
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Whether `short <= epsilon * long`.
    pub fn allows(&self, short: usize, long: usize) -> bool {
        short as u128 * self.den as u128 <= long as u128 * self.num as u128
    }

    /// Largest integer `k` with `k <= epsilon * long`.
    fn budget(&self, long: usize) -> usize {
        (long as u128 * self.num as u128 / self.den as u128) as usize
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Direction in which a detour leaves the circuit. The circuit runs
/// perpendicular to it at both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Heading {
    North,
    West,
    South,
    East,
}

impl Heading {
    pub const ALL: [Heading; 4] = [Heading::North, Heading::West, Heading::South, Heading::East];

    /// Image of `(x, y)` under the rotation taking north to this heading.
    fn rotate(self, (x, y): (i64, i64)) -> (i64, i64) {
        match self {
            Heading::North => (x, y),
            Heading::West => (-y, x),
            Heading::South => (-x, -y),
            Heading::East => (y, -x),
        }
    }

    /// Rotated `e1` and `e2` as unit steps.
    fn frame(self) -> ((i32, i32), (i32, i32)) {
        let a = self.rotate((1, 0));
        let b = self.rotate((0, 1));
        ((a.0 as i32, a.1 as i32), (b.0 as i32, b.1 as i32))
    }
}

fn shift(v: Vertex, (dx, dy): (i32, i32)) -> Vertex {
    Vertex::new(v.x + dx, v.y + dy)
}

fn back(v: Vertex, (dx, dy): (i32, i32)) -> Vertex {
    Vertex::new(v.x - dx, v.y - dy)
}

/// The face whose doubled centre is `(x2, y2)`; both coordinates are odd.
fn face_at((x2, y2): (i64, i64)) -> DualVertex {
    DualVertex::new((x2 - 1).div_euclid(2) as i32, (y2 - 1).div_euclid(2) as i32)
}

/// Faces at which the shield of a detour with these endpoints starts and
/// ends.
fn shield_ends(w0: Vertex, wm: Vertex, heading: Heading) -> (DualVertex, DualVertex) {
    let left = heading.rotate((-1, 1));
    let right = heading.rotate((1, 1));
    let start = face_at((2 * w0.x as i64 + left.0, 2 * w0.y as i64 + left.1));
    let end = face_at((2 * wm.x as i64 + right.0, 2 * wm.y as i64 + right.1));
    (start, end)
}

fn face_step(f: DualVertex, (dx, dy): (i32, i32)) -> DualVertex {
    DualVertex::new(f.x + dx, f.y + dy)
}

/// Signed crossing of the positive x-axis by the segment `a -> b`, with the
/// half-open rule that makes the sum over a closed curve its winding number
/// about the origin.
fn axis_crossing(a: (i64, i64), b: (i64, i64)) -> i32 {
    let cross = a.0 * b.1 - a.1 * b.0;
    if a.1 <= 0 && b.1 > 0 && cross > 0 {
        1
    } else if b.1 <= 0 && a.1 > 0 && cross < 0 {
        -1
    } else {
        0
    }
}

fn twice(v: Vertex) -> (i64, i64) {
    (2 * v.x as i64, 2 * v.y as i64)
}

/// An exterior bypass `detour` of the sub-arc `arc` of the circuit, covered by
/// the closed dual path `shield`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShieldedDetour {
    /// Open path from the first endpoint to the last.
    pub detour: OpenPath,
    /// The bypassed arc of the circuit, with the same endpoints as `detour`.
    pub arc: OpenPath,
    pub shield: DualPath,
    /// The circuit edge this detour was requested for.
    pub seed_edge: Edge,
    pub epsilon: Epsilon,
    pub heading: Heading,
}

impl ShieldedDetour {
    pub fn detour_len(&self) -> usize {
        self.detour.len()
    }

    pub fn arc_len(&self) -> usize {
        self.arc.len()
    }

    /// Deterministic order: shorter detours first, then by vertex sequence.
    pub fn order_key(&self) -> (usize, &[Vertex]) {
        (self.detour.len(), self.detour.vertices())
    }

    /// Same detour path in either direction, whatever edge it was found for.
    pub fn same_detour(&self, other: &ShieldedDetour) -> bool {
        let (a, b) = (self.detour.vertices(), other.detour.vertices());
        a == b || (a.len() == b.len() && a.iter().eq(b.iter().rev()))
    }
}

/// Which condition of the shielded-detour definition fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetourCondition {
    /// The detour is not a self-avoiding open path.
    NotOpenPath,
    /// An inner vertex of the detour is outside the region or not exterior
    /// to the circuit.
    NotExterior,
    /// The endpoints are not straight points of the circuit, or the detour
    /// does not leave perpendicular to it.
    EndpointGeometry,
    /// The arc is not the circuit sub-arc joining the endpoints through the
    /// seed edge.
    WrongArc,
    /// The arc and the detour together surround the origin.
    SurroundsOrigin,
    /// The shield is not a closed self-avoiding dual path between the
    /// prescribed faces with perpendicular end steps, or its curve with the
    /// detour encloses the origin.
    BadShield,
    /// The detour is too long for the arc it bypasses.
    TooLong,
}

/// Shared geometry of a circuit: cyclic positions and its exterior.
struct CircuitView<'a> {
    gamma: &'a LatticeCircuit,
    position: BTreeMap<Vertex, usize>,
    interior: FaceInterior,
    region: Region,
}

impl<'a> CircuitView<'a> {
    fn new(region: Region, gamma: &'a LatticeCircuit) -> Self {
        let position = gamma.cycle().iter().enumerate().map(|(i, v)| (*v, i)).collect();
        CircuitView { gamma, position, interior: FaceInterior::new(gamma.cycle()), region }
    }

    fn len(&self) -> usize {
        self.gamma.len()
    }

    fn at(&self, i: usize) -> Vertex {
        self.gamma.cycle()[i % self.len()]
    }

    /// Region vertices strictly outside the circuit.
    fn exterior(&self, v: Vertex) -> bool {
        self.region.contains(v) && !self.position.contains_key(&v) && !self.interior.contains(DualVertex::new(v.x, v.y))
    }

    /// Whether the circuit runs straight through `v` perpendicular to the
    /// heading, with the heading side exterior.
    fn is_endpoint(&self, v: Vertex, heading: Heading) -> bool {
        let Some(&i) = self.position.get(&v) else { return false };
        let (along, _) = heading.frame();
        let (prev, next) = (self.at(i + self.len() - 1), self.at(i + 1));
        let (fwd, bwd) = (shift(v, along), back(v, along));
        ((prev == bwd && next == fwd) || (prev == fwd && next == bwd)) && self.exterior(shift(v, heading.frame().1))
    }

    /// Vertices of the circuit from position `from` to `to`, forwards or
    /// backwards.
    fn arc(&self, from: usize, to: usize, forward: bool) -> Vec<Vertex> {
        let k = self.len();
        let steps = if forward { (to + k - from) % k } else { (from + k - to) % k };
        (0..=steps).map(|s| if forward { self.at(from + s) } else { self.at(from + k * steps - s) }).collect()
    }

    /// Position of a circuit edge, taken as the index of its earlier vertex.
    fn edge_position(&self, e: Edge) -> Option<usize> {
        let [a, b] = e.endpoints();
        let (&i, &j) = (self.position.get(&a)?, self.position.get(&b)?);
        let k = self.len();
        if (i + 1) % k == j {
            Some(i)
        } else if (j + 1) % k == i {
            Some(j)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    detour_len: usize,
    from: usize,
    to: usize,
    heading: Heading,
}

/// A detour that passed every check, before it is attached to a seed edge.
#[derive(Debug, Clone)]
struct Found {
    detour: Vec<Vertex>,
    arc: Vec<Vertex>,
    shield: Vec<DualVertex>,
    heading: Heading,
    /// Circuit edge positions covered by the arc: `start..start + count`
    /// cyclically.
    start: usize,
    count: usize,
}

/// Incremental search for the first shielded detour of each circuit edge.
///
/// Candidate endpoint pairs are the straight points of the circuit, in each
/// allowed heading. Each pair gets the lexicographically least shortest open
/// path through the exterior, and candidates are examined in order of detour
/// length, so the first valid detour covering an edge is minimal in the
/// (length, vertex sequence) order over this restricted family.
pub struct DetourSearch<'a, F: EdgeField + ?Sized> {
    field: &'a F,
    view: CircuitView<'a>,
    epsilon: Epsilon,
    grid: Grid,
    candidates: Vec<Candidate>,
    cursor: usize,
    found: Vec<Found>,
    /// For every circuit edge position, the index into `found` of its detour.
    assigned: Vec<Option<usize>>,
}

impl<'a, F: EdgeField + ?Sized> DetourSearch<'a, F> {
    pub fn new(field: &'a F, gamma: &'a LatticeCircuit, epsilon: Epsilon, headings: &[Heading]) -> Result<Self> {
        let region = field.region();
        if gamma.cycle().iter().any(|v| !region.contains(*v)) {
            return Err(Error::OutsideRegion);
        }
        let view = CircuitView::new(region, gamma);
        let grid = Grid::for_vertices(field);
        let mut search = DetourSearch {
            field,
            epsilon,
            grid,
            candidates: Vec::new(),
            cursor: 0,
            found: Vec::new(),
            assigned: vec![None; view.len()],
            view,
        };
        search.collect_candidates(headings);
        Ok(search)
    }

    fn collect_candidates(&mut self, headings: &[Heading]) {
        let k = self.view.len();
        let longest = k - 1;
        // A detour has at least two edges; no arc can pay for it otherwise.
        let Some(reach) = self.epsilon.budget(longest).checked_sub(2) else { return };
        let mut seen = BTreeSet::new();
        for &h in headings {
            if !seen.insert(h) {
                continue;
            }
            let (_, up) = h.frame();
            let ends: Vec<usize> = (0..k).filter(|&i| self.view.is_endpoint(self.view.at(i), h)).collect();
            for &i in &ends {
                let w0 = self.view.at(i);
                let w1 = shift(w0, up);
                if !self.field.is_open(Edge::between(w0, w1)) {
                    continue;
                }
                let view = &self.view;
                let dist = open_distances(self.field, &self.grid, &[w1], |v| view.exterior(v), reach as u32);
                for &j in &ends {
                    let wm = self.view.at(j);
                    let last = shift(wm, up);
                    let Some(d) = self.grid.vi(last).map(|x| dist[x]).filter(|d| *d != UNSEEN) else { continue };
                    if j == i || !self.field.is_open(Edge::between(last, wm)) {
                        continue;
                    }
                    let len = d as usize + 2;
                    let arc = ((j + k - i) % k).max((i + k - j) % k);
                    if self.epsilon.allows(len, arc) {
                        self.candidates.push(Candidate { detour_len: len, from: i, to: j, heading: h });
                    }
                }
            }
        }
        self.candidates.sort_by_key(|c| (c.detour_len, c.from, c.to, c.heading));
    }

    /// Completes one candidate into a detour, if every condition holds.
    fn complete(&self, c: &Candidate) -> Option<Found> {
        let view = &self.view;
        let (_, up) = c.heading.frame();
        let (w0, wm) = (view.at(c.from), view.at(c.to));
        let (w1, last) = (shift(w0, up), shift(wm, up));
        let dist = open_distances(self.field, &self.grid, &[last], |v| view.exterior(v), (c.detour_len - 2) as u32);
        let mut detour = vec![w0];
        detour.extend(descend_lex(self.field, &self.grid, &dist, w1));
        detour.push(wm);

        // The arc that closes up with the detour without surrounding the origin.
        let arc = [true, false].into_iter().map(|fwd| view.arc(c.from, c.to, fwd)).find(|arc| {
            let mut cycle = arc.clone();
            cycle.extend(detour[1..detour.len() - 1].iter().rev());
            vertex_winding(&cycle, Vertex::ORIGIN) == Ok(0)
        })?;
        if !self.epsilon.allows(detour.len() - 1, arc.len() - 1) {
            return None;
        }
        let shield = self.shield(&detour, c.heading)?;
        let k = view.len();
        let forward = view.at(c.from + 1) == arc[1];
        let start = if forward { c.from } else { c.to };
        Some(Found { detour, arc: arc.clone(), shield, heading: c.heading, start: start % k, count: arc.len() - 1 })
    }

    /// Closed dual path from the face left of the detour's first step to the
    /// face right of its last, whose curve with the detour winds zero times
    /// around the origin.
    fn shield(&self, detour: &[Vertex], heading: Heading) -> Option<Vec<DualVertex>> {
        let (_, up) = heading.frame();
        let (w0, wm) = (detour[0], detour[detour.len() - 1]);
        let (first, last) = shield_ends(w0, wm, heading);
        let (start, end) = (face_step(first, up), face_step(last, up));
        if first == last || !self.field.is_closed(first.primal_between(start)) {
            return None;
        }
        if !self.field.is_closed(end.primal_between(last)) {
            return None;
        }
        // Winding contributed by everything except the free middle of the shield.
        let m = detour.len() - 1;
        let mut fixed = axis_crossing(first.center2(), start.center2()) + axis_crossing(end.center2(), last.center2());
        fixed += axis_crossing(last.center2(), twice(detour[m - 1]));
        for i in (2..m).rev() {
            fixed += axis_crossing(twice(detour[i]), twice(detour[i - 1]));
        }
        fixed += axis_crossing(twice(detour[1]), first.center2());
        let middle = if start == end {
            (fixed == 0).then(|| vec![start])?
        } else {
            self.winding_bfs(start, end, -fixed, &[first, last])?
        };
        let mut shield = vec![first];
        shield.extend(middle);
        shield.push(last);
        let mut sorted = shield.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        // Exact recheck of the composite curve.
        let mut curve: Vec<RationalPoint> = shield.iter().map(|f| RationalPoint::from(*f)).collect();
        curve.extend(detour[1..m].iter().rev().map(|v| RationalPoint::from(*v)));
        (winding_number(&curve, RationalPoint::integer(0, 0)) == Ok(0)).then_some(shield)
    }

    /// Shortest closed dual path from `start` to `end` avoiding `banned`,
    /// whose own crossings of the positive x-axis sum to `want`.
    fn winding_bfs(&self, start: DualVertex, end: DualVertex, want: i32, banned: &[DualVertex]) -> Option<Vec<DualVertex>> {
        const SHEETS: i32 = 3;
        if want.abs() > SHEETS {
            return None;
        }
        let grid = Grid::for_faces(self.field);
        let width = (2 * SHEETS + 1) as usize;
        let state = |f: DualVertex, s: i32| grid.fi(f).map(|i| i * width + (s + SHEETS) as usize);
        let mut parent = vec![usize::MAX; grid.len() * width];
        let s0 = state(start, 0)?;
        let goal = state(end, want)?;
        parent[s0] = s0;
        let mut queue = VecDeque::from([s0]);
        while let Some(x) = queue.pop_front() {
            if x == goal {
                break;
            }
            let f = grid.face(x / width);
            let sheet = (x % width) as i32 - SHEETS;
            for u in f.neighbors() {
                if banned.contains(&u) || !self.field.is_closed(f.primal_between(u)) {
                    continue;
                }
                let s = sheet + axis_crossing(f.center2(), u.center2());
                if s.abs() > SHEETS {
                    continue;
                }
                let Some(y) = state(u, s) else { continue };
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if parent[goal] == usize::MAX {
            return None;
        }
        let mut path = vec![grid.face(goal / width)];
        let mut x = goal;
        while parent[x] != x {
            x = parent[x];
            path.push(grid.face(x / width));
        }
        path.reverse();
        Some(path)
    }

    /// Examines every candidate of the next detour length and assigns
    /// detours to the edges they newly cover.
    fn advance(&mut self) -> bool {
        let Some(first) = self.candidates.get(self.cursor) else { return false };
        let len = first.detour_len;
        let end = self.cursor + self.candidates[self.cursor..].iter().take_while(|c| c.detour_len == len).count();
        let batch: Vec<Found> = self.candidates[self.cursor..end].iter().filter_map(|c| self.complete(c)).collect();
        self.cursor = end;
        let mut order: Vec<usize> = (0..batch.len()).collect();
        order.sort_by(|&a, &b| batch[a].detour.cmp(&batch[b].detour));
        let k = self.view.len();
        for i in order {
            let f = &batch[i];
            let idx = self.found.len();
            let mut used = false;
            for s in 0..f.count {
                let slot = &mut self.assigned[(f.start + s) % k];
                if slot.is_none() {
                    *slot = Some(idx);
                    used = true;
                }
            }
            if used {
                self.found.push(f.clone());
            }
        }
        true
    }

    fn attach(&self, index: usize, e: Edge) -> ShieldedDetour {
        let f = &self.found[index];
        ShieldedDetour {
            detour: LatticePath::from_trusted(f.detour.clone()),
            arc: LatticePath::from_trusted(f.arc.clone()),
            shield: LatticePath::from_trusted(f.shield.clone()),
            seed_edge: e,
            epsilon: self.epsilon,
            heading: f.heading,
        }
    }

    /// The first shielded detour around circuit edge `e`, if the restricted
    /// search finds one.
    pub fn detour_for(&mut self, e: Edge) -> Result<Option<ShieldedDetour>> {
        let pos = self.view.edge_position(e).ok_or(Error::NotOnCircuit)?;
        while self.assigned[pos].is_none() && self.advance() {}
        Ok(self.assigned[pos].map(|i| self.attach(i, e)))
    }

    /// The detour of every circuit edge that has one, in circuit order.
    pub fn all(&mut self) -> Vec<ShieldedDetour> {
        while self.advance() {}
        let k = self.view.len();
        (0..k)
            .filter_map(|p| {
                let e = Edge::between(self.view.at(p), self.view.at(p + 1));
                self.assigned[p].map(|i| self.attach(i, e))
            })
            .collect()
    }
}

/// The first shielded detour around `e` over all four headings.
pub fn find_shielded_detour<F: EdgeField + ?Sized>(
    field: &F,
    gamma: &LatticeCircuit,
    e: Edge,
    epsilon: Epsilon,
) -> Result<Option<ShieldedDetour>> {
    if !gamma.contains_edge(e) {
        return Err(Error::NotOnCircuit);
    }
    DetourSearch::new(field, gamma, epsilon, &Heading::ALL)?.detour_for(e)
}

/// Detours of every circuit edge over all four headings.
pub fn find_all_detours<F: EdgeField + ?Sized>(
    field: &F,
    gamma: &LatticeCircuit,
    epsilon: Epsilon,
) -> Result<Vec<ShieldedDetour>> {
    Ok(DetourSearch::new(field, gamma, epsilon, &Heading::ALL)?.all())
}

/// Checks a detour against every condition of the definition.
pub fn validate_detour<F: EdgeField + ?Sized>(
    field: &F,
    gamma: &LatticeCircuit,
    d: &ShieldedDetour,
) -> core::result::Result<(), DetourCondition> {
    let view = CircuitView::new(field.region(), gamma);
    let p = d.detour.vertices();
    let m = p.len() - 1;
    if m < 2 || !d.detour.is_self_avoiding() || !d.detour.is_open_in(field) {
        return Err(DetourCondition::NotOpenPath);
    }
    if p[1..m].iter().any(|v| !view.exterior(*v)) {
        return Err(DetourCondition::NotExterior);
    }
    let (_, up) = d.heading.frame();
    let straight = view.is_endpoint(p[0], d.heading) && view.is_endpoint(p[m], d.heading);
    if !straight || p[1] != shift(p[0], up) || p[m - 1] != shift(p[m], up) {
        return Err(DetourCondition::EndpointGeometry);
    }
    let q = d.arc.vertices();
    let (&i, &j) = match (view.position.get(&p[0]), view.position.get(&p[m])) {
        (Some(i), Some(j)) => (i, j),
        _ => return Err(DetourCondition::EndpointGeometry),
    };
    let on_arc = [true, false].into_iter().any(|fwd| view.arc(i, j, fwd) == q);
    let seeded = q.windows(2).any(|w| Edge::between(w[0], w[1]) == d.seed_edge);
    if !on_arc || !seeded {
        return Err(DetourCondition::WrongArc);
    }
    let mut cycle = q.to_vec();
    cycle.extend(p[1..m].iter().rev());
    if vertex_winding(&cycle, Vertex::ORIGIN) != Ok(0) {
        return Err(DetourCondition::SurroundsOrigin);
    }
    let r = d.shield.vertices();
    let (first, last) = shield_ends(p[0], p[m], d.heading);
    let ends_ok = r.len() >= 3
        && r[0] == first
        && r[r.len() - 1] == last
        && r[1] == face_step(first, up)
        && r[r.len() - 2] == face_step(last, up);
    if !ends_ok || !d.shield.is_self_avoiding() || !d.shield.is_closed_in(field) {
        return Err(DetourCondition::BadShield);
    }
    let mut curve: Vec<RationalPoint> = r.iter().map(|f| RationalPoint::from(*f)).collect();
    curve.extend(p[1..m].iter().rev().map(|v| RationalPoint::from(*v)));
    if winding_number(&curve, RationalPoint::integer(0, 0)) != Ok(0) {
        return Err(DetourCondition::BadShield);
    }
    if !d.epsilon.allows(m, q.len() - 1) {
        return Err(DetourCondition::TooLong);
    }
    Ok(())
}

/// Detours whose bypassed arcs are pairwise vertex-disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DetourFamily {
    pub members: Vec<ShieldedDetour>,
    /// Sum of detour lengths.
    pub total_detour_length: usize,
    /// Sum of bypassed arc lengths.
    pub total_detoured_length: usize,
}

/// Greedy maximal family: detours in the deterministic order, each kept
/// unless its arc meets an arc already kept. Repeats of one detour path are
/// considered once.
pub fn select_maximal_family(detours: &[ShieldedDetour]) -> DetourFamily {
    let mut order: Vec<&ShieldedDetour> = detours.iter().collect();
    order.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    order.dedup_by(|a, b| a.same_detour(b));
    let mut used = BTreeSet::new();
    let mut family = DetourFamily::default();
    for d in order {
        if d.arc.vertices().iter().any(|v| used.contains(v)) {
            continue;
        }
        used.extend(d.arc.vertices().iter().copied());
        family.total_detour_length += d.detour_len();
        family.total_detoured_length += d.arc_len();
        family.members.push(d.clone());
    }
    family
}

/// Replaces one arc of the circuit by its detour.
fn splice(gamma: &LatticeCircuit, arcs: &[(&[Vertex], &[Vertex])]) -> Result<LatticeCircuit> {
    let view_pos: BTreeMap<Vertex, usize> = gamma.cycle().iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let k = gamma.len();
    // Each arc rewritten to run forwards along the circuit, with its
    // replacement in the matching direction.
    let mut starts: BTreeMap<usize, (usize, Vec<Vertex>)> = BTreeMap::new();
    let mut covered = vec![false; k];
    for (arc, detour) in arcs {
        let (Some(&a), Some(&b)) = (view_pos.get(&arc[0]), view_pos.get(&arc[arc.len() - 1])) else {
            return Err(Error::InvalidFamily);
        };
        if arc.len() < 2 || detour.first() != arc.first() || detour.last() != arc.last() {
            return Err(Error::InvalidFamily);
        }
        let forward = gamma.cycle()[(a + 1) % k] == arc[1];
        let (from, steps, repl) = if forward {
            (a, arc.len() - 1, detour.to_vec())
        } else {
            (b, arc.len() - 1, detour.iter().rev().copied().collect())
        };
        for s in 0..=steps {
            let i = (from + s) % k;
            let expect = if forward { arc[s] } else { arc[arc.len() - 1 - s] };
            if gamma.cycle()[i] != expect || covered[i] {
                return Err(Error::InvalidFamily);
            }
            covered[i] = true;
        }
        starts.insert(from, (steps, repl));
    }
    let Some(origin) = (0..k).find(|i| !covered[*i] || starts.contains_key(i)) else {
        return Err(Error::InvalidFamily);
    };
    let mut out = Vec::with_capacity(k);
    let mut i = origin;
    let mut walked = 0;
    while walked < k {
        if let Some((steps, repl)) = starts.get(&(i % k)) {
            out.extend_from_slice(&repl[..repl.len() - 1]);
            i += steps;
            walked += steps;
        } else {
            out.push(gamma.cycle()[i % k]);
            i += 1;
            walked += 1;
        }
    }
    LatticeCircuit::new(out).map_err(|_| Error::InvalidFamily)
}

/// The circuit made of the family's detours and the circuit edges outside
/// their arcs.
pub fn build_shortcut_circuit(gamma: &LatticeCircuit, family: &DetourFamily) -> Result<LatticeCircuit> {
    let arcs: Vec<(&[Vertex], &[Vertex])> =
        family.members.iter().map(|d| (d.arc.vertices(), d.detour.vertices())).collect();
    splice(gamma, &arcs)
}

/// A failed structural check on a detour run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaFailure {
    /// A listed detour breaks a condition of the definition.
    InvalidDetour { index: usize, condition: DetourCondition },
    /// Two detours share a vertex without being the same path.
    DetoursOverlap { first: usize, second: usize },
    /// The shortcut circuit uses a non-open edge.
    ShortcutNotOpen,
    /// The shortcut circuit leaves the region.
    ShortcutOutsideRegion,
    /// The shortcut circuit does not wind once around the origin.
    ShortcutWinding(Option<i32>),
    /// The shortcut circuit is longer than the original.
    ShortcutLonger,
    /// The shortcut circuit differs from the one built from the family.
    ShortcutMismatch,
    /// A face inside the original circuit is outside the shortcut.
    InteriorLost,
    /// A detour left out of the family could have been added.
    NotMaximal { index: usize },
    /// The family's detours are too long in total.
    BudgetExceeded,
    /// Part of a bypassed arc is not inside the circuit formed by its detour
    /// and the rest of the original circuit.
    ArcNotEnclosed { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaReport {
    pub failures: Vec<LemmaFailure>,
    pub detours_checked: usize,
    pub family_size: usize,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the structural checks: every detour is valid; distinct detours are
/// vertex-disjoint; the shortcut circuit is open, in the region, winds once,
/// is no longer than the circuit and contains its interior; the greedy family
/// is maximal and within its length budget; and each bypassed arc lies
/// inside the circuit obtained by taking its detour instead.
pub fn validate_detour_lemmas<F: EdgeField + ?Sized>(
    field: &F,
    gamma: &LatticeCircuit,
    detours: &[ShieldedDetour],
    sigma: &LatticeCircuit,
) -> LemmaReport {
    let mut report = LemmaReport { detours_checked: detours.len(), ..LemmaReport::default() };
    let fail = &mut report.failures;
    for (index, d) in detours.iter().enumerate() {
        if let Err(condition) = validate_detour(field, gamma, d) {
            fail.push(LemmaFailure::InvalidDetour { index, condition });
        }
    }
    let sets: Vec<BTreeSet<Vertex>> = detours.iter().map(|d| d.detour.vertices().iter().copied().collect()).collect();
    for a in 0..detours.len() {
        for b in a + 1..detours.len() {
            if !detours[a].same_detour(&detours[b]) && !sets[a].is_disjoint(&sets[b]) {
                fail.push(LemmaFailure::DetoursOverlap { first: a, second: b });
            }
        }
    }

    let region = field.region();
    if !sigma.is_open_in(field) {
        fail.push(LemmaFailure::ShortcutNotOpen);
    }
    if sigma.cycle().iter().any(|v| !region.contains(*v)) {
        fail.push(LemmaFailure::ShortcutOutsideRegion);
    }
    let w = sigma.winding_about_origin();
    if !matches!(w, Some(1) | Some(-1)) {
        fail.push(LemmaFailure::ShortcutWinding(w));
    }
    if sigma.len() > gamma.len() {
        fail.push(LemmaFailure::ShortcutLonger);
    }
    let inside = FaceInterior::new(sigma.cycle());
    if FaceInterior::new(gamma.cycle()).faces().any(|f| !inside.contains(f)) {
        fail.push(LemmaFailure::InteriorLost);
    }

    let family = select_maximal_family(detours);
    report.family_size = family.members.len();
    match build_shortcut_circuit(gamma, &family) {
        Ok(built) if built.len() == sigma.len() && built.edges().all(|e| sigma.contains_edge(e)) => {}
        _ => fail.push(LemmaFailure::ShortcutMismatch),
    }
    let kept: BTreeSet<Vertex> = family.members.iter().flat_map(|d| d.arc.vertices().iter().copied()).collect();
    for (index, d) in detours.iter().enumerate() {
        let member = family.members.iter().any(|m| m.same_detour(d));
        if !member && d.arc.vertices().iter().all(|v| !kept.contains(v)) {
            fail.push(LemmaFailure::NotMaximal { index });
        }
    }
    let eps = family.members.first().map(|d| d.epsilon);
    if let Some(eps) = eps {
        let within = eps.allows(family.total_detour_length, family.total_detoured_length)
            && eps.allows(family.total_detour_length, gamma.len());
        if !within {
            fail.push(LemmaFailure::BudgetExceeded);
        }
    }

    for (index, d) in detours.iter().enumerate() {
        let enclosed = splice(gamma, &[(d.arc.vertices(), d.detour.vertices())]).is_ok_and(|alt| {
            let q = d.arc.vertices();
            q[1..q.len() - 1].iter().all(|v| matches!(vertex_winding(alt.cycle(), *v), Ok(x) if x != 0))
        });
        if !enclosed {
            fail.push(LemmaFailure::ArcNotEnclosed { index });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_exact() {
        let e = Epsilon::from_f64(0.3).unwrap();
        assert_eq!((e.numerator(), e.denominator()), (3, 10));
        assert!(e.allows(3, 10) && !e.allows(4, 13));
        assert_eq!(Epsilon::new(2, 4).unwrap(), Epsilon::new(1, 2).unwrap());
        for bad in [0.0, 1.0, -0.5, f64::NAN] {
            assert_eq!(Epsilon::from_f64(bad), Err(Error::InvalidEpsilon));
        }
        assert_eq!(e.budget(7), 2);
    }

    #[test]
    fn headings_rotate_the_frame() {
        assert_eq!(Heading::North.frame(), ((1, 0), (0, 1)));
        assert_eq!(Heading::West.frame(), ((0, 1), (-1, 0)));
        assert_eq!(Heading::South.frame(), ((-1, 0), (0, -1)));
        assert_eq!(Heading::East.frame(), ((0, -1), (1, 0)));
        let (a, b) = shield_ends(Vertex::new(0, 0), Vertex::new(4, 0), Heading::North);
        assert_eq!((a, b), (DualVertex::new(-1, 0), DualVertex::new(4, 0)));
    }

    #[test]
    fn axis_crossings_sum_to_winding() {
        let square = [(2, -2), (2, 2), (-2, 2), (-2, -2)];
        let total: i32 = (0..4).map(|i| axis_crossing(square[i], square[(i + 1) % 4])).sum();
        assert_eq!(total, 1);
        let away = [(4, 2), (6, 2), (6, 4), (4, 4)];
        assert_eq!((0..4).map(|i| axis_crossing(away[i], away[(i + 1) % 4])).sum::<i32>(), 0);
    }
}

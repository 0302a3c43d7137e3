//! Primal and dual square lattices, regions and edge configurations.
//!
//! Dual vertices are the faces of the primal lattice. A face is stored by the
//! integer coordinates of its lower-left corner, so `DualVertex { x, y }` sits
//! at the point `(x + 1/2, y + 1/2)`.

mod config;
pub mod hash;
mod region;

pub use config::{Configuration, EdgeField, LazyConfiguration, Provenance};
pub use region::{Region, RegionKind, MAX_REGION_SIZE};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const ORIGIN: Vertex = Vertex { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    pub const fn offset(self, dx: i32, dy: i32) -> Self {
        Vertex { x: self.x + dx, y: self.y + dy }
    }

    /// Sup norm.
    pub fn norm_inf(self) -> u32 {
        self.x.unsigned_abs().max(self.y.unsigned_abs())
    }

    /// Neighbours in east, north, west, south order.
    pub fn neighbors(self) -> [Vertex; 4] {
        [self.offset(1, 0), self.offset(0, 1), self.offset(-1, 0), self.offset(0, -1)]
    }

    pub fn is_adjacent(self, other: Vertex) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// A nearest-neighbour edge, stored by its lexicographically smaller endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: Vertex,
    orientation: Orientation,
}

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Result<Self> {
        if !u.is_adjacent(v) {
            return Err(Error::InvalidPath);
        }
        Ok(Self::between(u, v))
    }

    /// Edge between two vertices already known to be adjacent.
    pub(crate) fn between(u: Vertex, v: Vertex) -> Self {
        debug_assert!(u.is_adjacent(v));
        let a = u.min(v);
        let orientation = if u.y == v.y { Orientation::Horizontal } else { Orientation::Vertical };
        Edge { a, orientation }
    }

    /// The edge from `v` to `v + (1, 0)`.
    pub const fn horizontal(v: Vertex) -> Self {
        Edge { a: v, orientation: Orientation::Horizontal }
    }

    /// The edge from `v` to `v + (0, 1)`.
    pub const fn vertical(v: Vertex) -> Self {
        Edge { a: v, orientation: Orientation::Vertical }
    }

    pub fn endpoint_a(self) -> Vertex {
        self.a
    }

    pub fn endpoint_b(self) -> Vertex {
        match self.orientation {
            Orientation::Horizontal => self.a.offset(1, 0),
            Orientation::Vertical => self.a.offset(0, 1),
        }
    }

    pub fn endpoints(self) -> [Vertex; 2] {
        [self.a, self.endpoint_b()]
    }

    pub fn orientation(self) -> Orientation {
        self.orientation
    }

    /// Midpoint in doubled coordinates.
    pub fn midpoint2(self) -> (i64, i64) {
        let b = self.endpoint_b();
        ((self.a.x + b.x) as i64, (self.a.y + b.y) as i64)
    }

    pub fn contains(self, v: Vertex) -> bool {
        v == self.a || v == self.endpoint_b()
    }
}

/// A face of the primal lattice, identified by its lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualVertex {
    pub x: i32,
    pub y: i32,
}

impl DualVertex {
    pub const fn new(x: i32, y: i32) -> Self {
        DualVertex { x, y }
    }

    pub const fn offset(self, dx: i32, dy: i32) -> Self {
        DualVertex { x: self.x + dx, y: self.y + dy }
    }

    /// Center in doubled coordinates.
    pub fn center2(self) -> (i64, i64) {
        (2 * self.x as i64 + 1, 2 * self.y as i64 + 1)
    }

    /// Twice the sup norm of the center.
    pub fn norm_inf2(self) -> u64 {
        let (cx, cy) = self.center2();
        cx.unsigned_abs().max(cy.unsigned_abs())
    }

    pub fn neighbors(self) -> [DualVertex; 4] {
        [self.offset(1, 0), self.offset(0, 1), self.offset(-1, 0), self.offset(0, -1)]
    }

    pub fn is_adjacent(self, other: DualVertex) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    /// The primal edge separating two adjacent faces.
    pub fn primal_between(self, other: DualVertex) -> Edge {
        debug_assert!(self.is_adjacent(other));
        if self.x == other.x {
            // Vertically stacked faces share a horizontal edge.
            Edge::horizontal(Vertex::new(self.x, self.y.max(other.y)))
        } else {
            Edge::vertical(Vertex::new(self.x.max(other.x), self.y))
        }
    }
}

/// A dual edge; it crosses exactly one primal edge at a common midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualEdge {
    primal: Edge,
}

impl DualEdge {
    pub fn primal(self) -> Edge {
        self.primal
    }

    /// Lower (horizontal primal) or left (vertical primal) face.
    pub fn endpoint_a(self) -> DualVertex {
        let v = self.primal.a;
        match self.primal.orientation {
            Orientation::Horizontal => DualVertex::new(v.x, v.y - 1),
            Orientation::Vertical => DualVertex::new(v.x - 1, v.y),
        }
    }

    pub fn endpoint_b(self) -> DualVertex {
        let v = self.primal.a;
        DualVertex::new(v.x, v.y)
    }

    pub fn endpoints(self) -> [DualVertex; 2] {
        [self.endpoint_a(), self.endpoint_b()]
    }

    pub fn between(u: DualVertex, v: DualVertex) -> Result<Self> {
        if !u.is_adjacent(v) {
            return Err(Error::InvalidPath);
        }
        Ok(DualEdge { primal: u.primal_between(v) })
    }

    pub fn orientation(self) -> Orientation {
        match self.primal.orientation {
            Orientation::Horizontal => Orientation::Vertical,
            Orientation::Vertical => Orientation::Horizontal,
        }
    }
}

pub fn dual_of(edge: Edge) -> DualEdge {
    DualEdge { primal: edge }
}

pub fn primal_of(dual: DualEdge) -> Edge {
    dual.primal
}

/// A side of a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

/// Axis-aligned rectangle of vertices `[x_min, x_max] x [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x_min: i32,
    pub x_max: i32,
    pub y_min: i32,
    pub y_max: i32,
}

impl Rect {
    pub const fn new(x_min: i32, x_max: i32, y_min: i32, y_max: i32) -> Self {
        Rect { x_min, x_max, y_min, y_max }
    }

    /// The square `[-r, r]^2`.
    pub const fn centered(r: i32) -> Self {
        Rect::new(-r, r, -r, r)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (self.x_min..=self.x_max).contains(&v.x) && (self.y_min..=self.y_max).contains(&v.y)
    }

    pub fn is_empty(&self) -> bool {
        self.x_min > self.x_max || self.y_min > self.y_max
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let r = *self;
        (r.x_min..=r.x_max).flat_map(move |x| (r.y_min..=r.y_max).map(move |y| Vertex::new(x, y)))
    }
}

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::lattice::{DualVertex, EdgeField, Vertex};

pub(crate) const UNSEEN: u32 = u32::MAX;

/// Dense index over the square `[lo, hi]^2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Grid {
    lo: i32,
    side: usize,
}

impl Grid {
    pub(crate) fn new(lo: i32, hi: i32) -> Self {
        Grid { lo, side: (hi - lo + 1) as usize }
    }

    /// Vertex grid of a field with a one-site margin.
    pub(crate) fn for_vertices<F: EdgeField + ?Sized>(field: &F) -> Self {
        let r = field.region().outer_radius();
        Grid::new(-r - 1, r + 1)
    }

    /// Face grid of a field; includes every face touching a region edge.
    pub(crate) fn for_faces<F: EdgeField + ?Sized>(field: &F) -> Self {
        let r = field.region().outer_radius();
        Grid::new(-r - 2, r + 1)
    }

    pub(crate) fn len(&self) -> usize {
        self.side * self.side
    }

    #[inline]
    pub(crate) fn index(&self, x: i32, y: i32) -> Option<usize> {
        let i = (x - self.lo) as usize;
        let j = (y - self.lo) as usize;
        if i < self.side && j < self.side {
            Some(i * self.side + j)
        } else {
            None
        }
    }

    #[inline]
    pub(crate) fn coords(&self, index: usize) -> (i32, i32) {
        ((index / self.side) as i32 + self.lo, (index % self.side) as i32 + self.lo)
    }

    pub(crate) fn vertex(&self, index: usize) -> Vertex {
        let (x, y) = self.coords(index);
        Vertex::new(x, y)
    }

    pub(crate) fn face(&self, index: usize) -> DualVertex {
        let (x, y) = self.coords(index);
        DualVertex::new(x, y)
    }

    pub(crate) fn vi(&self, v: Vertex) -> Option<usize> {
        self.index(v.x, v.y)
    }

    pub(crate) fn fi(&self, f: DualVertex) -> Option<usize> {
        self.index(f.x, f.y)
    }
}

/// Breadth-first distances over open edges, never entering vertices that fail
/// `allowed`. Start vertices are always admitted.
pub(crate) fn open_distances<F: EdgeField + ?Sized>(
    field: &F,
    grid: &Grid,
    starts: &[Vertex],
    allowed: impl Fn(Vertex) -> bool,
    max_dist: u32,
) -> Vec<u32> {
    let mut dist = vec![UNSEEN; grid.len()];
    let mut queue = VecDeque::new();
    for &s in starts {
        if let Some(i) = grid.vi(s) {
            if dist[i] == UNSEEN {
                dist[i] = 0;
                queue.push_back(s);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[grid.vi(v).unwrap()];
        if d >= max_dist {
            continue;
        }
        for u in v.neighbors() {
            let Some(j) = grid.vi(u) else { continue };
            if dist[j] != UNSEEN || !allowed(u) || !field.is_open(crate::lattice::Edge::between(v, u)) {
                continue;
            }
            dist[j] = d + 1;
            queue.push_back(u);
        }
    }
    dist
}

/// Follows a distance field downhill from `start`, always stepping to the
/// lexicographically least open neighbour one unit closer. The result is the
/// lexicographically least vertex sequence among shortest paths.
pub(crate) fn descend_lex<F: EdgeField + ?Sized>(field: &F, grid: &Grid, dist: &[u32], start: Vertex) -> Vec<Vertex> {
    let mut path = vec![start];
    let mut cur = start;
    let mut d = dist[grid.vi(start).unwrap()];
    while d > 0 {
        let mut best: Option<Vertex> = None;
        for u in cur.neighbors() {
            let Some(j) = grid.vi(u) else { continue };
            if dist[j] == d - 1 && field.is_open(crate::lattice::Edge::between(cur, u)) && best.map_or(true, |b| u < b) {
                best = Some(u);
            }
        }
        cur = best.expect("distance field is consistent");
        path.push(cur);
        d -= 1;
    }
    path
}

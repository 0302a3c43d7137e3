//! Paths, clusters, chemical distance, Menger counts and closed dual
//! connectivity over an edge configuration.

mod dual;
mod flow;
pub(crate) mod grid;
pub(crate) mod network;

pub use dual::{closed_dual_path, closed_dual_path_with_defects, DualTarget};
pub(crate) use dual::closed_bfs;
pub use flow::{max_disjoint_open_paths, DisjointPaths, Disjointness};
pub(crate) use flow::{vertex_disjoint_flow, SinkClass};

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{DualEdge, DualVertex, Edge, EdgeField, Region, Vertex};
use grid::{Grid, UNSEEN};

/// Points of the primal or the dual lattice.
pub trait LatticePoint: Copy + Ord + core::fmt::Debug {
    fn adjacent(self, other: Self) -> bool;
}

impl LatticePoint for Vertex {
    fn adjacent(self, other: Self) -> bool {
        self.is_adjacent(other)
    }
}

impl LatticePoint for DualVertex {
    fn adjacent(self, other: Self) -> bool {
        self.is_adjacent(other)
    }
}

/// A nearest-neighbour walk `v_0, ..., v_k`; its length is the edge count `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePath<V> {
    vertices: Vec<V>,
}

pub type OpenPath = LatticePath<Vertex>;
pub type DualPath = LatticePath<DualVertex>;

impl<V: LatticePoint> LatticePath<V> {
    pub fn new(vertices: Vec<V>) -> Result<Self> {
        if vertices.is_empty() || vertices.windows(2).any(|w| !w[0].adjacent(w[1])) {
            return Err(Error::InvalidPath);
        }
        Ok(LatticePath { vertices })
    }

    /// Like [`LatticePath::new`] but also rejects repeated vertices.
    pub fn new_self_avoiding(vertices: Vec<V>) -> Result<Self> {
        let p = Self::new(vertices)?;
        if !p.is_self_avoiding() {
            return Err(Error::InvalidPath);
        }
        Ok(p)
    }

    pub(crate) fn from_trusted(vertices: Vec<V>) -> Self {
        debug_assert!(Self::new(vertices.clone()).is_ok());
        LatticePath { vertices }
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<V> {
        self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn first(&self) -> V {
        self.vertices[0]
    }

    pub fn last(&self) -> V {
        *self.vertices.last().unwrap()
    }

    pub fn is_self_avoiding(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.vertices.iter().all(|v| seen.insert(*v))
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        LatticePath { vertices: v }
    }
}

impl LatticePath<Vertex> {
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| Edge::between(w[0], w[1]))
    }

    /// Canonical indices of the edges, or `None` if some edge leaves the region.
    pub fn edge_indices(&self, region: &Region) -> Option<Vec<usize>> {
        self.edges().map(|e| region.edge_index(e)).collect()
    }

    pub fn is_open_in<F: EdgeField + ?Sized>(&self, field: &F) -> bool {
        self.edges().all(|e| field.is_open(e))
    }
}

impl LatticePath<DualVertex> {
    pub fn dual_edges(&self) -> impl Iterator<Item = DualEdge> + '_ {
        self.vertices.windows(2).map(|w| crate::lattice::dual_of(w[0].primal_between(w[1])))
    }

    pub fn is_closed_in<F: EdgeField + ?Sized>(&self, field: &F) -> bool {
        self.dual_edges().all(|d| field.is_closed(d.primal()))
    }
}

/// Chronological loop erasure.
pub fn loop_erase<V: LatticePoint>(walk: &[V]) -> Vec<V> {
    let mut out: Vec<V> = Vec::with_capacity(walk.len());
    let mut pos = alloc::collections::BTreeMap::new();
    for &v in walk {
        if let Some(&i) = pos.get(&v) {
            for u in out.drain(i + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

/// Open cluster labels; a cluster is named by its least canonical vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clusters {
    region: Region,
    labels: Vec<usize>,
}

impl Clusters {
    pub fn label(&self, v: Vertex) -> Option<usize> {
        self.region.vertex_index(v).map(|i| self.labels[i])
    }

    /// Labels indexed by canonical vertex index.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn cluster_count(&self) -> usize {
        self.labels.iter().enumerate().filter(|(i, l)| *i == **l).count()
    }

    pub fn connected(&self, u: Vertex, v: Vertex) -> bool {
        matches!((self.label(u), self.label(v)), (Some(a), Some(b)) if a == b)
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn open_clusters<F: EdgeField + ?Sized>(field: &F) -> Clusters {
    let region = field.region();
    let mut parent: Vec<usize> = (0..region.vertex_count()).collect();
    for (i, e) in region.edges().enumerate() {
        if !field.is_open_index(i) {
            continue;
        }
        let a = region.vertex_index(e.endpoint_a()).unwrap();
        let b = region.vertex_index(e.endpoint_b()).unwrap();
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        // Keep the smaller index as root so roots are cluster minima.
        if ra < rb {
            parent[rb] = ra;
        } else if rb < ra {
            parent[ra] = rb;
        }
    }
    let labels = (0..parent.len()).map(|i| find(&mut parent, i)).collect();
    Clusters { region, labels }
}

/// A shortest open path from `sources` to `targets`.
///
/// Among all shortest paths the one with the lexicographically least vertex
/// sequence is returned.
pub fn shortest_open_path<F: EdgeField + ?Sized>(field: &F, sources: &[Vertex], targets: &[Vertex]) -> Option<OpenPath> {
    let region = field.region();
    let grid = Grid::for_vertices(field);
    let mut is_source = vec![false; grid.len()];
    for s in sources.iter().filter(|s| region.contains(**s)) {
        is_source[grid.vi(*s).unwrap()] = true;
    }
    let targets: Vec<Vertex> = targets.iter().copied().filter(|t| region.contains(*t)).collect();
    let mut dist = vec![UNSEEN; grid.len()];
    let mut queue = alloc::collections::VecDeque::new();
    for &t in &targets {
        let i = grid.vi(t).unwrap();
        if dist[i] == UNSEEN {
            dist[i] = 0;
            queue.push_back(t);
        }
    }
    let mut found: Option<u32> = None;
    while let Some(v) = queue.pop_front() {
        let d = dist[grid.vi(v).unwrap()];
        if is_source[grid.vi(v).unwrap()] {
            found = Some(d);
            break;
        }
        for u in v.neighbors() {
            let Some(j) = grid.vi(u) else { continue };
            if dist[j] == UNSEEN && field.is_open(Edge::between(v, u)) {
                dist[j] = d + 1;
                queue.push_back(u);
            }
        }
    }
    let d = found?;
    // Every vertex within distance d is labelled by now.
    let start = sources
        .iter()
        .copied()
        .filter(|s| grid.vi(*s).is_some_and(|i| is_source[i] && dist[i] == d))
        .min()?;
    Some(LatticePath::from_trusted(grid::descend_lex(field, &grid, &dist, start)))
}

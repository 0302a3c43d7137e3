use super::{Edge, Orientation, Rect, Vertex};
use crate::error::{Error, Result};

/// Largest supported size parameter.
pub const MAX_REGION_SIZE: u32 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    /// `{v : |v|_inf <= n}`.
    Box,
    /// `{v : n < |v|_inf <= 3n}`.
    Annulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Region {
    kind: RegionKind,
    n: u32,
}

/// Lattice sites `(x, y)` over a grid of columns, optionally with a centred
/// rectangular gap. Columns are ordered by `x`, sites in a column by `y`.
#[derive(Clone, Copy)]
struct Columns {
    x_lo: i64,
    x_hi: i64,
    y_lo: i64,
    y_hi: i64,
    // Columns `gx_lo..=gx_hi` lose rows `gy_lo..=gy_hi`.
    gap: Option<(i64, i64, i64, i64)>,
}

impl Columns {
    fn height(&self) -> i64 {
        self.y_hi - self.y_lo + 1
    }

    fn gap_height(&self) -> i64 {
        self.gap.map_or(0, |(_, _, lo, hi)| hi - lo + 1)
    }

    fn in_gap_column(&self, x: i64) -> bool {
        self.gap.is_some_and(|(lo, hi, _, _)| (lo..=hi).contains(&x))
    }

    fn count(&self) -> u64 {
        let cols = self.x_hi - self.x_lo + 1;
        let gap_cols = self.gap.map_or(0, |(lo, hi, _, _)| hi - lo + 1);
        (cols * self.height() - gap_cols * self.gap_height()) as u64
    }

    fn contains(&self, x: i64, y: i64) -> bool {
        if x < self.x_lo || x > self.x_hi || y < self.y_lo || y > self.y_hi {
            return false;
        }
        match self.gap {
            Some((gxl, gxh, gyl, gyh)) => !((gxl..=gxh).contains(&x) && (gyl..=gyh).contains(&y)),
            None => true,
        }
    }

    /// Number of sites in columns strictly left of `x`.
    fn before_column(&self, x: i64) -> i64 {
        let cols = x - self.x_lo;
        let gap_cols = match self.gap {
            Some((lo, hi, _, _)) if x > lo => (x.min(hi + 1)) - lo,
            _ => 0,
        };
        cols * self.height() - gap_cols * self.gap_height()
    }

    fn rank(&self, x: i64, y: i64) -> Option<u64> {
        if !self.contains(x, y) {
            return None;
        }
        let mut r = y - self.y_lo;
        if self.in_gap_column(x) {
            let (_, _, gyl, _) = self.gap.unwrap();
            if y > gyl {
                r -= self.gap_height();
            }
        }
        Some((self.before_column(x) + r) as u64)
    }

    fn unrank(&self, index: u64) -> Option<(i64, i64)> {
        if index >= self.count() {
            return None;
        }
        let i = index as i64;
        let h = self.height();
        let (x, r) = match self.gap {
            None => (self.x_lo + i / h, i % h),
            Some((gxl, gxh, _, _)) => {
                let left = (gxl - self.x_lo) * h;
                let short = h - self.gap_height();
                let middle = (gxh - gxl + 1) * short;
                if i < left {
                    (self.x_lo + i / h, i % h)
                } else if i < left + middle {
                    let j = i - left;
                    (gxl + j / short, j % short)
                } else {
                    let j = i - left - middle;
                    (gxh + 1 + j / h, j % h)
                }
            }
        };
        let mut y = self.y_lo + r;
        if let Some((_, _, gyl, gyh)) = self.gap {
            if self.in_gap_column(x) && y >= gyl {
                y += gyh - gyl + 1;
            }
        }
        Some((x, y))
    }
}

impl Region {
    pub fn new(kind: RegionKind, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_REGION_SIZE {
            return Err(Error::InvalidRegion);
        }
        Ok(Region { kind, n })
    }

    /// The box `B(n)`.
    pub fn square(n: u32) -> Result<Self> {
        Self::new(RegionKind::Box, n)
    }

    /// The annulus `A(n) = B(3n) \ B(n)`.
    pub fn annulus(n: u32) -> Result<Self> {
        Self::new(RegionKind::Annulus, n)
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_box(&self) -> bool {
        self.kind == RegionKind::Box
    }

    /// Sup-norm radius of the outer boundary.
    pub fn outer_radius(&self) -> i32 {
        match self.kind {
            RegionKind::Box => self.n as i32,
            RegionKind::Annulus => 3 * self.n as i32,
        }
    }

    /// Radius of the removed inner box, if any.
    pub fn hole_radius(&self) -> Option<i32> {
        match self.kind {
            RegionKind::Box => None,
            RegionKind::Annulus => Some(self.n as i32),
        }
    }

    pub fn bounding_rect(&self) -> Rect {
        Rect::centered(self.outer_radius())
    }

    fn vertex_columns(&self) -> Columns {
        let r = self.outer_radius() as i64;
        Columns {
            x_lo: -r,
            x_hi: r,
            y_lo: -r,
            y_hi: r,
            gap: self.hole_radius().map(|h| {
                let h = h as i64;
                (-h, h, -h, h)
            }),
        }
    }

    fn horizontal_columns(&self) -> Columns {
        let r = self.outer_radius() as i64;
        Columns {
            x_lo: -r,
            x_hi: r - 1,
            y_lo: -r,
            y_hi: r,
            gap: self.hole_radius().map(|h| {
                let h = h as i64;
                (-h - 1, h, -h, h)
            }),
        }
    }

    fn vertical_columns(&self) -> Columns {
        let r = self.outer_radius() as i64;
        Columns {
            x_lo: -r,
            x_hi: r,
            y_lo: -r,
            y_hi: r - 1,
            gap: self.hole_radius().map(|h| {
                let h = h as i64;
                (-h, h, -h - 1, h)
            }),
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let r = self.outer_radius() as u32;
        let norm = v.norm_inf();
        norm <= r && self.hole_radius().map_or(true, |h| norm > h as u32)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.contains(e.endpoint_a()) && self.contains(e.endpoint_b())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_columns().count() as usize
    }

    pub fn horizontal_edge_count(&self) -> usize {
        self.horizontal_columns().count() as usize
    }

    pub fn edge_count(&self) -> usize {
        (self.horizontal_columns().count() + self.vertical_columns().count()) as usize
    }

    /// Canonical index: horizontal edges by left endpoint, then vertical
    /// edges by bottom endpoint, each in `(x, y)` order.
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        let a = e.endpoint_a();
        match e.orientation() {
            Orientation::Horizontal => {
                self.horizontal_columns().rank(a.x as i64, a.y as i64).map(|i| i as usize)
            }
            Orientation::Vertical => self
                .vertical_columns()
                .rank(a.x as i64, a.y as i64)
                .map(|i| i as usize + self.horizontal_edge_count()),
        }
    }

    pub fn edge_at(&self, index: usize) -> Option<Edge> {
        let h = self.horizontal_edge_count();
        if index < h {
            let (x, y) = self.horizontal_columns().unrank(index as u64)?;
            Some(Edge::horizontal(Vertex::new(x as i32, y as i32)))
        } else {
            let (x, y) = self.vertical_columns().unrank((index - h) as u64)?;
            Some(Edge::vertical(Vertex::new(x as i32, y as i32)))
        }
    }

    /// Lexicographic rank of a vertex among region vertices.
    pub fn vertex_index(&self, v: Vertex) -> Option<usize> {
        self.vertex_columns().rank(v.x as i64, v.y as i64).map(|i| i as usize)
    }

    pub fn vertex_at(&self, index: usize) -> Option<Vertex> {
        let (x, y) = self.vertex_columns().unrank(index as u64)?;
        Some(Vertex::new(x as i32, y as i32))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edge_count()).map(move |i| self.edge_at(i).unwrap())
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(move |i| self.vertex_at(i).unwrap())
    }

    /// Vertices with `|v|_inf == r`.
    pub fn boundary(&self, r: i32) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices().filter(move |v| v.norm_inf() == r as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn box_one_indices() {
        let b = Region::square(1).unwrap();
        assert_eq!(b.edge_count(), 12);
        let idx = |u: (i32, i32), v: (i32, i32)| {
            b.edge_index(Edge::new(Vertex::new(u.0, u.1), Vertex::new(v.0, v.1)).unwrap())
        };
        assert_eq!(idx((-1, -1), (0, -1)), Some(0));
        assert_eq!(idx((0, 1), (1, 1)), Some(5));
        assert_eq!(idx((1, 0), (1, 1)), Some(11));
        assert_eq!(idx((1, 1), (2, 1)), None);
    }

    #[test]
    fn annulus_one_counts() {
        let a = Region::annulus(1).unwrap();
        assert_eq!(a.vertex_count(), 49 - 9);
        assert_eq!(a.horizontal_edge_count(), 30);
        assert_eq!(a.edge_count(), 60);
    }

    #[test]
    fn canonical_order_matches_sorted_enumeration() {
        for region in [
            Region::square(1).unwrap(),
            Region::square(3).unwrap(),
            Region::annulus(1).unwrap(),
            Region::annulus(2).unwrap(),
        ] {
            let r = region.outer_radius();
            let mut hs = Vec::new();
            let mut vs = Vec::new();
            for x in -r - 1..=r + 1 {
                for y in -r - 1..=r + 1 {
                    let v = Vertex::new(x, y);
                    let h = Edge::horizontal(v);
                    if region.contains_edge(h) {
                        hs.push(h);
                    }
                    let u = Edge::vertical(v);
                    if region.contains_edge(u) {
                        vs.push(u);
                    }
                }
            }
            hs.extend(vs);
            assert_eq!(hs.len(), region.edge_count());
            for (i, e) in hs.iter().enumerate() {
                assert_eq!(region.edge_index(*e), Some(i));
                assert_eq!(region.edge_at(i), Some(*e));
            }
            let verts: Vec<Vertex> = region.vertices().collect();
            assert_eq!(verts.len(), region.vertex_count());
            assert!(verts.windows(2).all(|w| w[0] < w[1]));
            assert!(verts.iter().all(|v| region.contains(*v)));
        }
    }
}

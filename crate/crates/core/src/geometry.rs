//! Exact planar predicates on lattice curves.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{DualVertex, Vertex};

/// The point `(x / den, y / den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub x: i64,
    pub y: i64,
    pub den: i64,
}

impl RationalPoint {
    pub fn new(x: i64, y: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidGeometry);
        }
        Ok(RationalPoint { x, y, den })
    }

    pub const fn integer(x: i64, y: i64) -> Self {
        RationalPoint { x, y, den: 1 }
    }

    /// The point `(x2 / 2, y2 / 2)`.
    pub const fn halves(x2: i64, y2: i64) -> Self {
        RationalPoint { x: x2, y: y2, den: 2 }
    }
}

impl From<Vertex> for RationalPoint {
    fn from(v: Vertex) -> Self {
        RationalPoint::integer(v.x as i64, v.y as i64)
    }
}

impl From<DualVertex> for RationalPoint {
    fn from(f: DualVertex) -> Self {
        let (x, y) = f.center2();
        RationalPoint::halves(x, y)
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Signed number of turns the closed polyline makes around `point`.
///
/// The polyline is closed implicitly if its last vertex differs from its
/// first. Uses a ray in direction `(2, 1)` and a half-open crossing rule, all
/// in integer arithmetic.
pub fn winding_number(polyline: &[RationalPoint], point: RationalPoint) -> Result<i32> {
    if polyline.iter().chain([&point]).any(|p| p.den <= 0) {
        return Err(Error::InvalidGeometry);
    }
    let mut l: i128 = point.den as i128;
    for p in polyline {
        let d = p.den as i128;
        l = l / gcd(l, d) * d;
        if l > (1 << 40) {
            return Err(Error::InvalidGeometry);
        }
    }
    // Scale to a common denominator, translate the query to the origin, then
    // map v -> (dot(r, v), cross(r, v)) with r = (2, 1); the map has positive
    // determinant, so the ray becomes the positive x axis.
    let scale = |p: &RationalPoint| -> (i128, i128) {
        let k = l / p.den as i128;
        (p.x as i128 * k, p.y as i128 * k)
    };
    let (qx, qy) = scale(&point);
    let pts: Vec<(i128, i128)> = polyline
        .iter()
        .map(|p| {
            let (x, y) = scale(p);
            let (dx, dy) = (x - qx, y - qy);
            (2 * dx + dy, 2 * dy - dx)
        })
        .collect();
    if pts.is_empty() {
        return Ok(0);
    }
    let mut w = 0i32;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        let cross = a.0 * b.1 - a.1 * b.0;
        if cross == 0 && a.0.min(b.0) <= 0 && 0 <= a.0.max(b.0) && a.1.min(b.1) <= 0 && 0 <= a.1.max(b.1) {
            return Err(Error::PointOnCurve);
        }
        if a.1 <= 0 {
            if b.1 > 0 && cross > 0 {
                w += 1;
            }
        } else if b.1 <= 0 && cross < 0 {
            w -= 1;
        }
    }
    Ok(w)
}

/// Winding number of a lattice cycle around a lattice point.
pub fn vertex_winding(cycle: &[Vertex], point: Vertex) -> Result<i32> {
    let poly: Vec<RationalPoint> = cycle.iter().map(|v| RationalPoint::from(*v)).collect();
    winding_number(&poly, point.into())
}

/// Twice the signed area enclosed by a closed lattice walk.
pub fn signed_area2(cycle: &[Vertex]) -> i64 {
    let k = cycle.len();
    (0..k)
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            a.x as i64 * b.y as i64 - b.x as i64 * a.y as i64
        })
        .sum()
}

/// Faces enclosed by a simple lattice cycle, found by scanning each row of
/// faces for crossings of the cycle's vertical edges.
#[derive(Debug, Clone)]
pub struct FaceInterior {
    rows: BTreeMap<i32, Vec<i32>>,
}

impl FaceInterior {
    pub fn new(cycle: &[Vertex]) -> Self {
        let mut rows: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
        let k = cycle.len();
        for i in 0..k {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            if a.x == b.x && a.y != b.y {
                rows.entry(a.y.min(b.y)).or_default().push(a.x);
            }
        }
        for xs in rows.values_mut() {
            xs.sort_unstable();
        }
        FaceInterior { rows }
    }

    pub fn contains(&self, f: DualVertex) -> bool {
        self.rows.get(&f.y).is_some_and(|xs| xs.partition_point(|&x| x <= f.x) % 2 == 1)
    }

    /// All enclosed faces, row by row.
    pub fn faces(&self) -> impl Iterator<Item = DualVertex> + '_ {
        self.rows.iter().flat_map(|(&y, xs)| {
            xs.chunks(2).flat_map(move |c| (c[0]..c[1]).map(move |x| DualVertex::new(x, y)))
        })
    }

    pub fn count(&self) -> u64 {
        self.rows.values().map(|xs| xs.chunks(2).map(|c| (c[1] - c[0]) as u64).sum::<u64>()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn square(c: (i64, i64), ccw: bool) -> Vec<RationalPoint> {
        let mut v = vec![
            RationalPoint::integer(c.0 - 1, c.1 - 1),
            RationalPoint::integer(c.0 + 1, c.1 - 1),
            RationalPoint::integer(c.0 + 1, c.1 + 1),
            RationalPoint::integer(c.0 - 1, c.1 + 1),
        ];
        if !ccw {
            v.reverse();
        }
        v
    }

    #[test]
    fn winding_of_squares() {
        let o = RationalPoint::integer(0, 0);
        assert_eq!(winding_number(&square((0, 0), true), o), Ok(1));
        assert_eq!(winding_number(&square((0, 0), false), o), Ok(-1));
        assert_eq!(winding_number(&square((10, 10), true), o), Ok(0));
        let mut twice = square((0, 0), true);
        twice.extend(square((0, 0), true));
        assert_eq!(winding_number(&twice, o), Ok(2));
        assert_eq!(winding_number(&square((0, 0), true), RationalPoint::integer(1, 0)), Err(Error::PointOnCurve));
        assert_eq!(winding_number(&square((0, 0), true), RationalPoint::halves(1, 1)), Ok(1));
    }

    #[test]
    fn vertex_on_ray_counts_once() {
        // Curve vertices lie exactly on the ray from the query point.
        let poly = [
            RationalPoint::integer(2, 1),
            RationalPoint::integer(-1, 1),
            RationalPoint::integer(-1, -1),
            RationalPoint::integer(4, 2),
        ];
        assert_eq!(winding_number(&poly, RationalPoint::integer(0, 0)), Ok(1));
    }

    #[test]
    fn face_interior_of_rectangle() {
        let v = |x, y| Vertex::new(x, y);
        let cycle = [v(0, 0), v(2, 0), v(2, 1), v(0, 1)];
        let cyc: Vec<Vertex> = [v(0, 0), v(1, 0), v(2, 0), v(2, 1), v(1, 1), v(0, 1)].into();
        let fi = FaceInterior::new(&cyc);
        assert_eq!(fi.count(), 2);
        assert!(fi.contains(DualVertex::new(1, 0)));
        assert!(!fi.contains(DualVertex::new(2, 0)));
        assert_eq!(signed_area2(&cycle), 4);
    }
}

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::grid::{Grid, UNSEEN};
use super::{DualPath, LatticePath};
use crate::error::{Error, Result};
use crate::lattice::{DualEdge, DualVertex, EdgeField, Side};

/// Where a closed dual path has to arrive.
#[derive(Debug, Clone, Copy)]
pub enum DualTarget<'a> {
    /// A side of a box region. A dual path touches a side when it reaches one
    /// of the faces just outside the box beyond that side, which is possible
    /// only through a closed edge of the boundary row or column.
    Side(Side),
    Faces(&'a [DualVertex]),
}

/// Faces just outside side `side` of the box `[-n, n]^2`.
pub(crate) fn beyond_side(n: i32, side: Side, f: DualVertex) -> bool {
    let along = |c: i32| (-n..n).contains(&c);
    match side {
        Side::Bottom => f.y == -n - 1 && along(f.x),
        Side::Top => f.y == n && along(f.x),
        Side::Left => f.x == -n - 1 && along(f.y),
        Side::Right => f.x == n && along(f.y),
    }
}

/// Shortest path over closed dual edges from either endpoint of `source`.
/// The state of `source` itself is not constrained.
pub fn closed_dual_path<F: EdgeField + ?Sized>(
    field: &F,
    source: DualEdge,
    target: DualTarget<'_>,
) -> Result<Option<DualPath>> {
    let region = field.region();
    if !region.contains_edge(source.primal()) {
        return Err(Error::OutsideRegion);
    }
    let grid = Grid::for_faces(field);
    let starts = source.endpoints();
    let path = match target {
        DualTarget::Side(side) => {
            if !region.is_box() {
                return Err(Error::WrongRegionKind);
            }
            let n = region.n() as i32;
            closed_bfs(field, &grid, &starts, |_| true, |f| beyond_side(n, side, f))
        }
        DualTarget::Faces(faces) => {
            let mut mark = vec![false; grid.len()];
            for f in faces {
                if let Some(i) = grid.fi(*f) {
                    mark[i] = true;
                }
            }
            closed_bfs(field, &grid, &starts, |_| true, |f| grid.fi(f).is_some_and(|i| mark[i]))
        }
    };
    Ok(path.map(LatticePath::from_trusted))
}

/// Breadth-first search over closed dual edges. Targets are not expanded.
/// Returns the lexicographically least shortest path, read backwards from the
/// least target of the first layer that contains one.
pub(crate) fn closed_bfs<F: EdgeField + ?Sized>(
    field: &F,
    grid: &Grid,
    starts: &[DualVertex],
    allowed: impl Fn(DualVertex) -> bool,
    is_target: impl Fn(DualVertex) -> bool,
) -> Option<Vec<DualVertex>> {
    let dist = closed_distances(field, grid, starts, &allowed, &is_target, true);
    let d = first_target_layer(grid, &dist, &is_target)?;
    let end = (0..grid.len())
        .filter(|&i| dist[i] == d && is_target(grid.face(i)))
        .map(|i| grid.face(i))
        .min()?;
    let mut path = vec![end];
    let mut cur = end;
    for k in (0..d).rev() {
        let prev = cur
            .neighbors()
            .into_iter()
            .filter(|u| {
                grid.fi(*u).is_some_and(|j| dist[j] == k) && field.is_closed(u.primal_between(cur)) && !is_target(*u)
            })
            .min()
            .expect("distance field is consistent");
        path.push(prev);
        cur = prev;
    }
    path.reverse();
    Some(path)
}

fn first_target_layer(grid: &Grid, dist: &[u32], is_target: &impl Fn(DualVertex) -> bool) -> Option<u32> {
    (0..grid.len()).filter(|&i| dist[i] != UNSEEN && is_target(grid.face(i))).map(|i| dist[i]).min()
}

/// Distances over closed dual edges. With `stop_at_target`, the search halts
/// once the first target layer is fully labelled.
pub(crate) fn closed_distances<F: EdgeField + ?Sized>(
    field: &F,
    grid: &Grid,
    starts: &[DualVertex],
    allowed: &impl Fn(DualVertex) -> bool,
    is_target: &impl Fn(DualVertex) -> bool,
    stop_at_target: bool,
) -> Vec<u32> {
    let mut dist = vec![UNSEEN; grid.len()];
    let mut queue = VecDeque::new();
    for &s in starts {
        if let Some(i) = grid.fi(s) {
            if dist[i] == UNSEEN {
                dist[i] = 0;
                queue.push_back(s);
            }
        }
    }
    while let Some(f) = queue.pop_front() {
        let d = dist[grid.fi(f).unwrap()];
        if is_target(f) {
            if stop_at_target {
                break;
            }
            continue;
        }
        for u in f.neighbors() {
            let Some(j) = grid.fi(u) else { continue };
            if dist[j] != UNSEEN || !(is_target(u) || allowed(u)) || !field.is_closed(f.primal_between(u)) {
                continue;
            }
            dist[j] = d + 1;
            queue.push_back(u);
        }
    }
    dist
}

/// Dual path from `sources` to `targets` crossing at most `budget` open
/// primal edges (the defects), minimising the number of defects.
pub fn closed_dual_path_with_defects<F: EdgeField + ?Sized>(
    field: &F,
    sources: &[DualVertex],
    targets: &[DualVertex],
    budget: usize,
) -> Option<(DualPath, usize)> {
    let grid = Grid::for_faces(field);
    let mut mark = vec![false; grid.len()];
    for f in targets {
        if let Some(i) = grid.fi(*f) {
            mark[i] = true;
        }
    }
    defect_search(field, &grid, sources, |_| true, |f| grid.fi(f).is_some_and(|i| mark[i]), budget)
        .map(|(p, d)| (LatticePath::from_trusted(p), d))
}

/// 0-1 breadth-first search: closed dual edges cost nothing, dual edges of
/// open region edges cost one defect.
pub(crate) fn defect_search<F: EdgeField + ?Sized>(
    field: &F,
    grid: &Grid,
    sources: &[DualVertex],
    allowed: impl Fn(DualVertex) -> bool,
    is_target: impl Fn(DualVertex) -> bool,
    budget: usize,
) -> Option<(Vec<DualVertex>, usize)> {
    let region = field.region();
    let mut cost = vec![UNSEEN; grid.len()];
    let mut parent = vec![usize::MAX; grid.len()];
    let mut deque = VecDeque::new();
    for &s in sources {
        if let Some(i) = grid.fi(s) {
            if cost[i] != 0 {
                cost[i] = 0;
                parent[i] = i;
                deque.push_front(i);
            }
        }
    }
    let mut done = vec![false; grid.len()];
    while let Some(i) = deque.pop_front() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let f = grid.face(i);
        if cost[i] as usize > budget {
            return None;
        }
        if is_target(f) {
            let mut path = vec![f];
            let mut j = i;
            while parent[j] != j {
                j = parent[j];
                path.push(grid.face(j));
            }
            path.reverse();
            return Some((path, cost[i] as usize));
        }
        for u in f.neighbors() {
            let Some(j) = grid.fi(u) else { continue };
            let e = f.primal_between(u);
            if done[j] || !region.contains_edge(e) || !(is_target(u) || allowed(u)) {
                continue;
            }
            let w = u32::from(field.is_open(e));
            if cost[i] + w < cost[j] {
                cost[j] = cost[i] + w;
                parent[j] = i;
                if w == 0 {
                    deque.push_front(j);
                } else {
                    deque.push_back(j);
                }
            }
        }
    }
    None
}

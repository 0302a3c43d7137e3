//! A small explicit flow network with integer capacities and costs.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Network {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Network {
    pub fn new(nodes: usize) -> Self {
        Network { arcs: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    /// Adds an arc and its residual twin; returns the arc id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, cost });
        self.arcs.push(Arc { to: from, cap: 0, cost: -cost });
        self.out[from].push(id);
        self.out[to].push(id + 1);
        id
    }

    /// Augments along shortest-cost paths until `limit` units are sent or no
    /// path remains. Returns (flow, cost). Cost ties are broken by hop count.
    pub fn min_cost_flow(&mut self, s: usize, t: usize, limit: i64) -> (i64, i64) {
        let n = self.out.len();
        let (mut flow, mut cost) = (0, 0);
        while flow < limit {
            // Bellman-Ford queue variant; graphs here are small.
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            let mut queued = vec![false; n];
            let mut queue = VecDeque::new();
            dist[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                for &id in &self.out[u] {
                    let a = self.arcs[id];
                    if a.cap > 0 && dist[u] + a.cost < dist[a.to] {
                        dist[a.to] = dist[u] + a.cost;
                        via[a.to] = id;
                        if !queued[a.to] {
                            queued[a.to] = true;
                            queue.push_back(a.to);
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            let mut push = limit - flow;
            let mut v = t;
            while v != s {
                let id = via[v];
                push = push.min(self.arcs[id].cap);
                v = self.arcs[id ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let id = via[v];
                self.arcs[id].cap -= push;
                self.arcs[id ^ 1].cap += push;
                v = self.arcs[id ^ 1].to;
            }
            flow += push;
            cost += push * dist[t];
        }
        (flow, cost)
    }

    pub fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let n = self.out.len();
        let mut flow = 0;
        while flow < limit {
            let mut via = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &id in &self.out[u] {
                    let a = self.arcs[id];
                    if a.cap > 0 && !seen[a.to] {
                        seen[a.to] = true;
                        via[a.to] = id;
                        queue.push_back(a.to);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut v = t;
            while v != s {
                let id = via[v];
                self.arcs[id].cap -= 1;
                self.arcs[id ^ 1].cap += 1;
                v = self.arcs[id ^ 1].to;
            }
            flow += 1;
        }
        flow
    }
}

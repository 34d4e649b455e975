//! Generic flow networks with lower bounds, demands and convex arc costs.
//!
//! A node's demand is the net flow it must absorb (inflow minus outflow).
//! Feasibility and extreme arc flows use Dinic's algorithm; minimum cost uses
//! successive shortest paths with Dijkstra and potentials.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use thiserror::Error;

pub type NodeId = usize;
pub type ArcId = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub lo: i64,
    pub hi: i64,
    /// `marginal[i]` is the cost of raising the flow from `lo + i` to `lo + i + 1`.
    /// Empty means the arc is free.
    pub marginal: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Network {
    pub demand: Vec<i64>,
    pub labels: Vec<String>,
    pub arcs: Vec<Arc>,
    /// Constant added to every flow's cost.
    pub base_cost: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("arc {0} carries {1}, outside its bounds")]
    Bounds(ArcId, i64),
    #[error("node {0} absorbs {1} instead of its demand {2}")]
    Conservation(NodeId, i64, i64),
    #[error("expected {0} arc flows, got {1}")]
    Length(usize, usize),
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, demand: i64, label: impl Into<String>) -> NodeId {
        self.demand.push(demand);
        self.labels.push(label.into());
        self.demand.len() - 1
    }

    pub fn add_arc(&mut self, from: NodeId, to: NodeId, lo: i64, hi: i64) -> ArcId {
        self.add_costed_arc(from, to, lo, hi, Vec::new())
    }

    pub fn add_costed_arc(&mut self, from: NodeId, to: NodeId, lo: i64, hi: i64, marginal: Vec<f64>) -> ArcId {
        debug_assert!(lo <= hi);
        debug_assert!(marginal.is_empty() || marginal.len() as i64 == hi - lo);
        self.arcs.push(Arc { from, to, lo, hi, marginal });
        self.arcs.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.demand.len()
    }

    pub fn has_costs(&self) -> bool {
        self.arcs.iter().any(|a| a.marginal.iter().any(|&c| c != 0.0))
    }

    pub fn check(&self, flow: &[i64]) -> Result<(), FlowError> {
        if flow.len() != self.arcs.len() {
            return Err(FlowError::Length(self.arcs.len(), flow.len()));
        }
        let mut net = vec![0i64; self.node_count()];
        for (i, (a, &f)) in self.arcs.iter().zip(flow).enumerate() {
            if f < a.lo || f > a.hi {
                return Err(FlowError::Bounds(i, f));
            }
            net[a.to] += f;
            net[a.from] -= f;
        }
        for (v, (&got, &want)) in net.iter().zip(&self.demand).enumerate() {
            if got != want {
                return Err(FlowError::Conservation(v, got, want));
            }
        }
        Ok(())
    }

    pub fn cost(&self, flow: &[i64]) -> f64 {
        self.base_cost
            + self
                .arcs
            .iter()
            .zip(flow)
                .map(|(a, &f)| a.marginal.iter().take((f - a.lo).max(0) as usize).sum::<f64>())
                .sum::<f64>()
    }

    /// Plain-text dump: `n` and `a` lines in the spirit of DIMACS.
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p flow {} {}", self.node_count(), self.arcs.len());
        for (v, d) in self.demand.iter().enumerate() {
            let _ = writeln!(s, "n {} {} {}", v + 1, d, self.labels[v]);
        }
        for a in &self.arcs {
            let _ = write!(s, "a {} {} {} {}", a.from + 1, a.to + 1, a.lo, a.hi);
            for c in &a.marginal {
                let _ = write!(s, " {c}");
            }
            s.push('\n');
        }
        s
    }
}

const INF: i64 = i64::MAX / 4;

static SOLVES: AtomicU64 = AtomicU64::new(0);

/// Number of flow computations started so far in this process.
pub fn flow_solves() -> u64 {
    SOLVES.load(AtomicOrdering::Relaxed)
}

/// Residual graph for Dinic's algorithm.
#[derive(Clone)]
struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    it: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), level: vec![0; n], it: vec![0; n] }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) -> usize {
        let i = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.head[u].push(i);
        self.to.push(u);
        self.cap.push(0);
        self.head[v].push(i + 1);
        i
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.it[u] < self.head[u].len() {
            let e = self.head[u][self.it[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, f.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.it[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        while total < limit && self.bfs(s, t) {
            self.it.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, limit - total);
                if f == 0 {
                    break;
                }
                total += f;
                if total == limit {
                    break;
                }
            }
        }
        total
    }
}

/// Residual graph with a feasible flow and the super terminals detached.
struct Feasible {
    d: Dinic,
    arc_edge: Vec<usize>,
}

fn feasible_residual(net: &Network) -> Option<Feasible> {
    SOLVES.fetch_add(1, AtomicOrdering::Relaxed);
    let n = net.node_count();
    let (s, t) = (n, n + 1);
    let mut d = Dinic::new(n + 2);
    let mut excess = net.demand.clone();
    let mut arc_edge = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        excess[a.to] -= a.lo;
        excess[a.from] += a.lo;
        arc_edge.push(d.add(a.from, a.to, a.hi - a.lo));
    }
    let mut need = 0;
    let mut term = Vec::new();
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            term.push(d.add(v, t, x));
            need += x;
        } else if x < 0 {
            term.push(d.add(s, v, -x));
        }
    }
    if d.max_flow(s, t, INF) != need {
        return None;
    }
    for e in term {
        d.cap[e] = 0;
        d.cap[e ^ 1] = 0;
    }
    Some(Feasible { d, arc_edge })
}

impl Feasible {
    fn flows(&self, net: &Network) -> Vec<i64> {
        net.arcs.iter().zip(&self.arc_edge).map(|(a, &e)| a.lo + self.d.cap[e ^ 1]).collect()
    }
}

/// Some feasible flow, ignoring costs.
pub fn feasible(net: &Network) -> Option<Vec<i64>> {
    let f = feasible_residual(net)?;
    let flow = f.flows(net);
    debug_assert!(net.check(&flow).is_ok());
    Some(flow)
}

/// Smallest and largest flow on `arc` over all feasible flows.
pub fn extremize(net: &Network, arc: ArcId) -> Option<(i64, i64)> {
    let f = feasible_residual(net)?;
    let a = &net.arcs[arc];
    let e = f.arc_edge[arc];
    let y = f.d.cap[e ^ 1];
    let room = f.d.cap[e];
    let mut up = f.d.clone();
    up.cap[e] = 0;
    up.cap[e ^ 1] = 0;
    let mut down = up.clone();
    let inc = if room > 0 { up.max_flow(a.to, a.from, room) } else { 0 };
    let dec = if y > 0 { down.max_flow(a.from, a.to, y) } else { 0 };
    Some((a.lo + y - dec, a.lo + y + inc))
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64, usize);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

/// A minimum-cost feasible flow. Arc costs must be convex.
pub fn min_cost(net: &Network) -> Option<(Vec<i64>, f64)> {
    SOLVES.fetch_add(1, AtomicOrdering::Relaxed);
    let n = net.node_count();
    let (s, t) = (n, n + 1);
    let mut to = Vec::new();
    let mut cap: Vec<i64> = Vec::new();
    let mut cost: Vec<f64> = Vec::new();
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
    let mut excess = net.demand.clone();
    let mut add = |u: usize, v: usize, c: i64, w: f64, to: &mut Vec<usize>, cap: &mut Vec<i64>, cost: &mut Vec<f64>| {
        let i = to.len();
        to.extend([v, u]);
        cap.extend([c, 0]);
        cost.extend([w, -w]);
        head[u].push(i);
        head[v].push(i + 1);
        i
    };
    // Segments of equal marginal cost per arc.
    let mut segs: Vec<Vec<usize>> = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        debug_assert!(a.marginal.windows(2).all(|w| w[0] <= w[1] + 1e-9), "costs must be convex");
        excess[a.to] -= a.lo;
        excess[a.from] += a.lo;
        let mut mine = Vec::new();
        if a.marginal.is_empty() {
            if a.hi > a.lo {
                mine.push(add(a.from, a.to, a.hi - a.lo, 0.0, &mut to, &mut cap, &mut cost));
            }
        } else {
            let mut i = 0;
            while i < a.marginal.len() {
                let mut j = i;
                while j < a.marginal.len() && a.marginal[j] == a.marginal[i] {
                    j += 1;
                }
                mine.push(add(a.from, a.to, (j - i) as i64, a.marginal[i], &mut to, &mut cap, &mut cost));
                i = j;
            }
        }
        segs.push(mine);
    }
    // Saturate negative segments so every residual arc starts non-negative.
    for (ai, a) in net.arcs.iter().enumerate() {
        for &e in &segs[ai] {
            if cost[e] < 0.0 {
                let c = cap[e];
                cap[e] = 0;
                cap[e ^ 1] = c;
                excess[a.to] -= c;
                excess[a.from] += c;
            }
        }
    }
    let mut need = 0;
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            add(v, t, x, 0.0, &mut to, &mut cap, &mut cost);
            need += x;
        } else if x < 0 {
            add(s, v, -x, 0.0, &mut to, &mut cap, &mut cost);
        }
    }
    let nn = n + 2;
    let mut pot = vec![0.0f64; nn];
    let mut sent = 0;
    let mut dist = vec![f64::INFINITY; nn];
    let mut via = vec![usize::MAX; nn];
    while sent < need {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        via.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0.0;
        let mut pq = BinaryHeap::from([Key(0.0, s)]);
        while let Some(Key(du, u)) = pq.pop() {
            if du > dist[u] {
                continue;
            }
            for &e in &head[u] {
                if cap[e] <= 0 {
                    continue;
                }
                let v = to[e];
                let nd = du + cost[e] + pot[u] - pot[v];
                let nd = if nd < du { du } else { nd }; // clamp rounding noise
                if nd < dist[v] - 1e-12 {
                    dist[v] = nd;
                    via[v] = e;
                    pq.push(Key(nd, v));
                }
            }
        }
        if !dist[t].is_finite() {
            return None;
        }
        for v in 0..nn {
            if dist[v].is_finite() {
                pot[v] += dist[v];
            }
        }
        let mut f = need - sent;
        let mut v = t;
        while v != s {
            let e = via[v];
            f = f.min(cap[e]);
            v = to[e ^ 1];
        }
        let mut v = t;
        while v != s {
            let e = via[v];
            cap[e] -= f;
            cap[e ^ 1] += f;
            v = to[e ^ 1];
        }
        sent += f;
    }
    let flow: Vec<i64> = net
        .arcs
        .iter()
        .zip(&segs)
        .map(|(a, es)| a.lo + es.iter().map(|&e| cap[e ^ 1]).sum::<i64>())
        .collect();
    debug_assert!(net.check(&flow).is_ok());
    let c = net.cost(&flow);
    Some((flow, c))
}

/// Minimum-cost flow when the network has costs, any feasible flow otherwise.
pub fn solve(net: &Network) -> Option<Vec<i64>> {
    if net.has_costs() {
        min_cost(net).map(|(f, _)| f)
    } else {
        feasible(net)
    }
}

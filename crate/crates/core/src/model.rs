//! Instances, edge costs, validation and edge classification.

use crate::connectivity::is_biconnected;
use crate::embedding::RotationSystem;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::planar::is_planar;
use std::collections::BTreeSet;
use thiserror::Error;

/// Cost of bending an edge, as a function of its bend count.
#[derive(Clone, Debug, PartialEq)]
pub enum EdgeCost {
    /// Free up to `flex` bends, forbidden beyond.
    Flex(u32),
    /// `table[b]` is the cost of `b` bends; anything past the end is forbidden.
    Table(Vec<f64>),
}

impl EdgeCost {
    pub fn cost(&self, bends: u32) -> f64 {
        match self {
            EdgeCost::Flex(f) => {
                if bends <= *f {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            EdgeCost::Table(t) => t.get(bends as usize).copied().unwrap_or(f64::INFINITY),
        }
    }

    /// Largest bend count with finite cost (`None` for an empty table).
    pub fn max_bends(&self) -> Option<u32> {
        match self {
            EdgeCost::Flex(f) => Some(*f),
            EdgeCost::Table(t) => t.iter().rposition(|c| c.is_finite()).map(|i| i as u32),
        }
    }

    pub fn flex(&self) -> Option<u32> {
        match self {
            EdgeCost::Flex(f) => Some(*f),
            EdgeCost::Table(_) => None,
        }
    }

    pub fn is_inflexible(&self) -> bool {
        self.max_bends() == Some(0)
    }

    pub fn is_monotone(&self) -> bool {
        match self {
            EdgeCost::Flex(_) => true,
            EdgeCost::Table(t) => t.iter().all(|c| *c >= 0.0 && !c.is_nan()) && t.windows(2).all(|w| w[0] <= w[1]),
        }
    }

    /// Convex on its finite domain (flex costs count as convex).
    pub fn is_convex(&self) -> bool {
        match self {
            EdgeCost::Flex(_) => true,
            EdgeCost::Table(t) => {
                let fin: Vec<f64> = t.iter().copied().take_while(|c| c.is_finite()).collect();
                fin.len() == t.len() && fin.windows(3).all(|w| w[2] - w[1] >= w[1] - w[0] - 1e-12)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub costs: Vec<EdgeCost>,
    pub vertex_names: Vec<String>,
    pub edge_names: Vec<String>,
    pub poles: Option<(VertexId, VertexId)>,
    pub embedding: Option<RotationSystem>,
    pub restrict_90: BTreeSet<VertexId>,
}

impl Instance {
    /// Instance with generated names `v0..`, `e0..`.
    pub fn new(graph: Graph, costs: Vec<EdgeCost>) -> Instance {
        assert_eq!(graph.m(), costs.len(), "one cost per edge");
        let vertex_names = (0..graph.n()).map(|v| format!("v{v}")).collect();
        let edge_names = (0..graph.m()).map(|e| format!("e{e}")).collect();
        Instance {
            graph,
            costs,
            vertex_names,
            edge_names,
            poles: None,
            embedding: None,
            restrict_90: BTreeSet::new(),
        }
    }

    pub fn uniform_flex(graph: Graph, flex: u32) -> Instance {
        let m = graph.m();
        Instance::new(graph, vec![EdgeCost::Flex(flex); m])
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)], flex: u32) -> Instance {
        Instance::uniform_flex(Graph::from_edges(n, edges), flex)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
    pub fn m(&self) -> usize {
        self.graph.m()
    }

    /// All edges carry flexibilities (no cost tables).
    pub fn is_flexdraw(&self) -> bool {
        self.costs.iter().all(|c| c.flex().is_some())
    }

    pub fn total_cost(&self, bends: &[u32]) -> f64 {
        bends.iter().zip(&self.costs).map(|(&b, c)| c.cost(b)).sum()
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, cost: EdgeCost) -> EdgeId {
        let e = self.graph.add_edge(u, v);
        self.costs.push(cost);
        self.edge_names.push(format!("e{e}"));
        e
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = self.graph.add_vertex();
        self.vertex_names.push(format!("v{v}"));
        v
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|n| n == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("vertex {0} has degree {1} > 4")]
    Degree(String, usize),
    #[error("graph is not planar")]
    NonPlanar,
    #[error("edge {0}: cost table is not monotone non-decreasing and non-negative")]
    NonMonotone(String),
    #[error("edge {0} is a self-loop")]
    SelfLoop(String),
    #[error("cost list length {0} does not match edge count {1}")]
    CostCount(usize, usize),
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error("restricted vertex {0} does not have degree 2")]
    Restriction(String),
    #[error("embedding: {0}")]
    Embedding(String),
    #[error("duplicate name {0}")]
    Duplicate(String),
}

/// Every problem with the instance; valid iff the list is empty.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let g = &inst.graph;
    let mut out = Vec::new();
    let name = |v: VertexId| inst.vertex_names.get(v).cloned().unwrap_or_else(|| format!("#{v}"));
    let ename = |e: EdgeId| inst.edge_names.get(e).cloned().unwrap_or_else(|| format!("#{e}"));
    if inst.costs.len() != g.m() {
        out.push(Violation::CostCount(inst.costs.len(), g.m()));
    }
    if inst.vertex_names.len() != g.n() || inst.edge_names.len() != g.m() {
        out.push(Violation::Dangling("name table size".into()));
    }
    for names in [&inst.vertex_names, &inst.edge_names] {
        let mut seen = BTreeSet::new();
        for n in names {
            if !seen.insert(n) {
                out.push(Violation::Duplicate(n.clone()));
            }
        }
    }
    for v in 0..g.n() {
        if g.degree(v) > 4 {
            out.push(Violation::Degree(name(v), g.degree(v)));
        }
    }
    for (e, [a, b]) in g.edges().iter().enumerate() {
        if a == b {
            out.push(Violation::SelfLoop(ename(e)));
        }
    }
    for (e, c) in inst.costs.iter().enumerate() {
        if !c.is_monotone() {
            out.push(Violation::NonMonotone(ename(e)));
        }
    }
    if let Some((s, t)) = inst.poles {
        if s >= g.n() || t >= g.n() {
            out.push(Violation::Dangling("pole".into()));
        }
    }
    for &v in &inst.restrict_90 {
        if v >= g.n() {
            out.push(Violation::Dangling(format!("restricted vertex #{v}")));
        } else if g.degree(v) != 2 {
            out.push(Violation::Restriction(name(v)));
        }
    }
    if !g.has_self_loop() && !is_planar(g) {
        out.push(Violation::NonPlanar);
    }
    if let Some(rs) = &inst.embedding {
        if let Err(e) = rs.check_planar(g) {
            out.push(Violation::Embedding(e.to_string()));
        }
    }
    out
}

/// Maps edges of a merged instance back to chains of the original.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeMap {
    /// For each new edge: original darts along the chain, oriented from the
    /// new edge's tail to its head.
    pub chains: Vec<Vec<crate::graph::Dart>>,
    /// Original vertex id for each new vertex.
    pub vertex_origin: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("edge {0} carries a cost table; only flexibilities can be merged")]
    CostTable(String),
}

/// Replaces each maximal chain through degree-2 vertices by a single edge of
/// flexibility Σ flex + (number of interior vertices). Poles and restricted
/// vertices end chains. Chains closing on themselves are left alone.
pub fn merge_degree2(inst: &Instance) -> Result<(Instance, MergeMap), MergeError> {
    use crate::graph::Dart;
    let g = &inst.graph;
    let interior = |v: VertexId| {
        g.degree(v) == 2
            && !inst.restrict_90.contains(&v)
            && inst.poles.is_none_or(|(s, t)| v != s && v != t)
    };
    let mut used = vec![false; g.m()];
    let mut chains: Vec<Vec<Dart>> = Vec::new();
    // Chains start at non-interior vertices.
    for v in 0..g.n() {
        if interior(v) {
            continue;
        }
        for &d0 in g.out_darts(v) {
            if used[d0.edge()] {
                continue;
            }
            let mut chain = vec![d0];
            used[d0.edge()] = true;
            let mut d = d0;
            while interior(g.head(d)) {
                let w = g.head(d);
                let nd = *g.out_darts(w).iter().find(|x| x.edge() != d.edge()).unwrap();
                used[nd.edge()] = true;
                chain.push(nd);
                d = nd;
            }
            chains.push(chain);
        }
    }
    // Remaining unused edges lie on cycles of interior vertices; keep them.
    for e in 0..g.m() {
        if !used[e] {
            chains.push(vec![Dart::new(e, false)]);
        }
    }
    let mut keep_vertex: Vec<bool> = (0..g.n()).map(|v| !interior(v)).collect();
    let mut split = Vec::new();
    for c in chains {
        let a = g.tail(c[0]);
        let b = g.head(*c.last().unwrap());
        if c.len() > 1 && a == b {
            for d in &c[1..] {
                keep_vertex[g.tail(*d)] = true;
            }
            split.extend(c.into_iter().map(|d| vec![d]));
        } else {
            split.push(c);
        }
    }
    // Cycles of interior vertices were pushed edge by edge: keep their vertices.
    for c in &split {
        if c.len() == 1 {
            let (a, b) = g.endpoints(c[0].edge());
            keep_vertex[a] = true;
            keep_vertex[b] = true;
        }
    }
    let mut new_id = vec![usize::MAX; g.n()];
    let mut vertex_origin = Vec::new();
    for v in 0..g.n() {
        if keep_vertex[v] {
            new_id[v] = vertex_origin.len();
            vertex_origin.push(v);
        }
    }
    let mut ng = Graph::new(vertex_origin.len());
    let mut costs = Vec::new();
    let mut edge_names = Vec::new();
    split.sort_by_key(|c| c.iter().map(|d| d.edge()).min());
    for c in &split {
        let a = g.tail(c[0]);
        let b = g.head(*c.last().unwrap());
        ng.add_edge(new_id[a], new_id[b]);
        if c.len() == 1 {
            costs.push(inst.costs[c[0].edge()].clone());
            edge_names.push(inst.edge_names[c[0].edge()].clone());
        } else {
            let mut f = c.len() as u32 - 1;
            for d in c {
                match inst.costs[d.edge()].flex() {
                    Some(x) => f += x,
                    None => return Err(MergeError::CostTable(inst.edge_names[d.edge()].clone())),
                }
            }
            costs.push(EdgeCost::Flex(f));
            edge_names.push(c.iter().map(|d| inst.edge_names[d.edge()].as_str()).collect::<Vec<_>>().join("+"));
        }
    }
    let mut out = Instance::new(ng, costs);
    out.vertex_names = vertex_origin.iter().map(|&v| inst.vertex_names[v].clone()).collect();
    out.edge_names = edge_names;
    out.poles = inst.poles.map(|(s, t)| (new_id[s], new_id[t]));
    out.restrict_90 = inst.restrict_90.iter().map(|&v| new_id[v]).collect();
    Ok((out, MergeMap { chains: split, vertex_origin }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Flexible,
    SemiCritical,
    Critical,
}

/// Classifies `e` inside the st-graph `g` with poles `s`, `t`.
pub fn classify_edge(g: &Graph, costs: &[EdgeCost], s: VertexId, t: VertexId, e: EdgeId) -> EdgeClass {
    if !costs[e].is_inflexible() {
        return EdgeClass::Flexible;
    }
    let (a, b) = g.endpoints(e);
    let hot = |v: VertexId| g.degree(v) == 4 || ((v == s || v == t) && g.degree(v) >= 2);
    if hot(a) || hot(b) {
        EdgeClass::Critical
    } else {
        EdgeClass::SemiCritical
    }
}

/// Number of critical edges of an st-graph.
pub fn critical_count(g: &Graph, costs: &[EdgeCost], s: VertexId, t: VertexId) -> usize {
    (0..g.m()).filter(|&e| classify_edge(g, costs, s, t, e) == EdgeClass::Critical).count()
}

/// Poles are valid for an st-graph when adding `st` leaves a biconnected graph.
pub fn is_st_graph(g: &Graph, s: VertexId, t: VertexId) -> bool {
    if s == t || s >= g.n() || t >= g.n() {
        return false;
    }
    let mut h = g.clone();
    h.add_edge(s, t);
    is_biconnected(&h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn costs() {
        let c = EdgeCost::Table(vec![0.0, 1.0, 3.0]);
        assert_eq!(c.cost(2), 3.0);
        assert!(c.cost(3).is_infinite());
        assert!(c.is_monotone() && c.is_convex());
        assert!(!EdgeCost::Table(vec![0.0, 2.0, 3.0]).is_convex());
        assert!(!EdgeCost::Table(vec![1.0, 0.0]).is_monotone());
        assert_eq!(EdgeCost::Flex(2).max_bends(), Some(2));
    }

    #[test]
    fn validation() {
        let sq = Instance::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 1);
        assert!(validate_instance(&sq).is_empty());
        let mut e = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                e.push((i, j));
            }
        }
        let k5 = Instance::from_edges(5, &e, 1);
        let v = validate_instance(&k5);
        assert!(v.contains(&Violation::NonPlanar));
        let star = Instance::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], 1);
        assert!(matches!(validate_instance(&star)[0], Violation::Degree(_, 5)));
    }

    #[test]
    fn merge_path() {
        let p = Instance::from_edges(3, &[(0, 1), (1, 2)], 1);
        let (m, map) = merge_degree2(&p).unwrap();
        assert_eq!(m.m(), 1);
        assert_eq!(m.costs[0], EdgeCost::Flex(3));
        assert_eq!(map.chains[0].len(), 2);
        let p0 = Instance::from_edges(3, &[(0, 1), (1, 2)], 0);
        assert_eq!(merge_degree2(&p0).unwrap().0.costs[0], EdgeCost::Flex(1));
    }

    #[test]
    fn merge_identity_without_degree_two() {
        let k4 = Instance::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 1);
        let (m, _) = merge_degree2(&k4).unwrap();
        assert_eq!(m.graph.edges(), k4.graph.edges());
    }

    #[test]
    fn merge_keeps_cycles_and_refuses_tables() {
        let c = Instance::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 1);
        let (m, _) = merge_degree2(&c).unwrap();
        assert_eq!(m.m(), 4);
        let mut t = Instance::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], 1);
        t.costs[0] = EdgeCost::Table(vec![0.0, 1.0]);
        assert!(merge_degree2(&t).is_err());
    }

    #[test]
    fn classification() {
        // Vertex 0 has degree 4.
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]);
        let costs = vec![EdgeCost::Flex(0); 6];
        assert_eq!(classify_edge(&g, &costs, 1, 2, 0), EdgeClass::Critical);
        let h = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let c = vec![EdgeCost::Flex(0); 6];
        assert_eq!(classify_edge(&h, &c, 2, 3, 0), EdgeClass::SemiCritical);
        let p = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(classify_edge(&p, &vec![EdgeCost::Flex(0); 3], 0, 1, 0), EdgeClass::Critical);
        assert_eq!(classify_edge(&p, &vec![EdgeCost::Flex(1); 3], 0, 1, 0), EdgeClass::Flexible);
    }
}

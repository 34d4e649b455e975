//! SPQR-trees of biconnected multigraphs.
//!
//! Components are split recursively at bonds and separation pairs until
//! every piece is a bond, a cycle or triconnected; adjacent cycles and
//! adjacent bonds are then merged. Quadratic, which suits the sizes here.
//!
//! Real edges live directly in skeletons; they play the role of Q-nodes.
//! The tree is rooted at the reference edge: the root node is the skeleton
//! holding it, and that edge acts as the root's parent edge.

use crate::connectivity::blocks_masked;
use crate::graph::{EdgeId, Graph, VertexId};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// A single real edge; only for one-edge graphs.
    Q,
    S,
    P,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkelRef {
    Real(EdgeId),
    /// Virtual edge; the twin is edge `edge` of node `node`.
    Virtual { node: usize, edge: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkelEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub r: SkelRef,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpqrNode {
    pub kind: NodeKind,
    pub edges: Vec<SkelEdge>,
}

impl SpqrNode {
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// The skeleton as a graph over local vertex indices.
    pub fn skeleton(&self) -> (Graph, Vec<VertexId>) {
        let vs = self.vertices();
        let idx: HashMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(vs.len());
        for e in &self.edges {
            g.add_edge(idx[&e.u], idx[&e.v]);
        }
        (g, vs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpqrTree {
    pub nodes: Vec<SpqrNode>,
    /// Node and skeleton edge of every real edge.
    pub home: Vec<(usize, usize)>,
    pub reference: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpqrError {
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("graph has no edges")]
    Empty,
    #[error("reference edge {0} does not exist")]
    UnknownEdge(EdgeId),
}

#[derive(Clone, Copy, Debug)]
struct CEdge {
    u: VertexId,
    v: VertexId,
    /// Real edge id, or `m + k` for the k-th virtual pair.
    id: usize,
}

struct Comp {
    kind: NodeKind,
    edges: Vec<CEdge>,
}

pub fn build_spqr(g: &Graph, reference: EdgeId) -> Result<SpqrTree, SpqrError> {
    let m = g.m();
    if m == 0 {
        return Err(SpqrError::Empty);
    }
    if reference >= m {
        return Err(SpqrError::UnknownEdge(reference));
    }
    if g.has_self_loop() {
        return Err(SpqrError::NotBiconnected);
    }
    let (bl, _) = crate::connectivity::blocks(g);
    let used: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
    if bl.len() != 1 || used.iter().any(|&v| g.degree(v) == 0) || !g.is_connected() {
        return Err(SpqrError::NotBiconnected);
    }
    let all: Vec<CEdge> = (0..m).map(|e| CEdge { u: g.edges()[e][0], v: g.edges()[e][1], id: e }).collect();
    if m == 1 {
        let node = SpqrNode { kind: NodeKind::Q, edges: vec![SkelEdge { u: all[0].u, v: all[0].v, r: SkelRef::Real(0) }] };
        return Ok(SpqrTree { nodes: vec![node], home: vec![(0, 0)], reference });
    }
    let mut next_virtual = m;
    let mut done: Vec<Comp> = Vec::new();
    let mut work = vec![all];
    while let Some(c) = work.pop() {
        if let Some((bond, rest)) = split_bond(&c) {
            if rest.is_empty() {
                done.push(Comp { kind: NodeKind::P, edges: bond });
                continue;
            }
            let (a, b) = (bond[0].u, bond[0].v);
            let id = next_virtual;
            next_virtual += 1;
            let mut p = bond;
            p.push(CEdge { u: a, v: b, id });
            done.push(Comp { kind: NodeKind::P, edges: p });
            let mut r = rest;
            r.push(CEdge { u: a, v: b, id });
            work.push(r);
            continue;
        }
        if is_cycle(&c) {
            done.push(Comp { kind: NodeKind::S, edges: c });
            continue;
        }
        match split_pair(&c) {
            Some((a, b, side, rest)) => {
                let id = next_virtual;
                next_virtual += 1;
                let mut x = side;
                x.push(CEdge { u: a, v: b, id });
                let mut y = rest;
                y.push(CEdge { u: a, v: b, id });
                work.push(x);
                work.push(y);
            }
            None => done.push(Comp { kind: NodeKind::R, edges: c }),
        }
    }
    Ok(assemble(done, m, next_virtual, reference))
}

/// Splits off the largest class of parallel edges if it has at least two edges.
fn split_bond(c: &[CEdge]) -> Option<(Vec<CEdge>, Vec<CEdge>)> {
    let key = |e: &CEdge| (e.u.min(e.v), e.u.max(e.v));
    let mut count: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for e in c {
        *count.entry(key(e)).or_default() += 1;
    }
    let (&k, &n) = count.iter().max_by_key(|(k, n)| (**n, std::cmp::Reverse(**k)))?;
    if n < 2 {
        return None;
    }
    let (bond, rest) = c.iter().partition(|e| key(e) == k);
    Some((bond, rest))
}

fn is_cycle(c: &[CEdge]) -> bool {
    let mut deg: HashMap<VertexId, usize> = HashMap::new();
    for e in c {
        *deg.entry(e.u).or_default() += 1;
        *deg.entry(e.v).or_default() += 1;
    }
    deg.values().all(|&d| d == 2)
}

type Split = (VertexId, VertexId, Vec<CEdge>, Vec<CEdge>);

/// A separation pair of a simple biconnected component and one separation class.
fn split_pair(c: &[CEdge]) -> Option<Split> {
    let mut vs: Vec<VertexId> = c.iter().flat_map(|e| [e.u, e.v]).collect();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() < 4 {
        return None;
    }
    let idx: HashMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut g = Graph::new(vs.len());
    for e in c {
        g.add_edge(idx[&e.u], idx[&e.v]);
    }
    let class_of = |a: usize, b: usize, seed: usize| -> Split {
        // Edges of the component of g − {a,b} containing `seed`, plus their attachments.
        let mut seen = vec![false; g.n()];
        seen[seed] = true;
        let mut stack = vec![seed];
        while let Some(x) = stack.pop() {
            for w in g.neighbors(x) {
                if w != a && w != b && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let mut side = Vec::new();
        let mut rest = Vec::new();
        for (i, e) in c.iter().enumerate() {
            let (x, y) = g.endpoints(i);
            if seen[x] || seen[y] {
                side.push(*e);
            } else {
                rest.push(*e);
            }
        }
        (vs[a], vs[b], side, rest)
    };
    // A degree-2 vertex separates its neighbours.
    for w in 0..g.n() {
        if g.degree(w) == 2 {
            let ns: Vec<usize> = g.neighbors(w).collect();
            return Some(class_of(ns[0], ns[1], w));
        }
    }
    let mut skip = vec![false; g.n()];
    for a in 0..g.n() {
        skip[a] = true;
        let (_, cut) = blocks_masked(&g, &skip);
        skip[a] = false;
        if let Some(b) = (0..g.n()).find(|&b| cut[b]) {
            let seed = (0..g.n()).find(|&x| x != a && x != b).unwrap();
            return Some(class_of(a, b, seed));
        }
    }
    None
}

fn assemble(done: Vec<Comp>, m: usize, nids: usize, reference: EdgeId) -> SpqrTree {
    // Merge cycle–cycle and bond–bond neighbours.
    let k = done.len();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); nids];
    for (ci, c) in done.iter().enumerate() {
        for e in &c.edges {
            if e.id >= m {
                holders[e.id].push(ci);
            }
        }
    }
    let mut uf: Vec<usize> = (0..k).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let n = uf[y];
            uf[y] = r;
            y = n;
        }
        r
    }
    let mut dissolved = vec![false; nids];
    for id in m..nids {
        let (a, b) = (holders[id][0], holders[id][1]);
        if done[a].kind == done[b].kind && matches!(done[a].kind, NodeKind::S | NodeKind::P) {
            dissolved[id] = true;
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            uf[ra] = rb;
        }
    }
    let mut node_of = vec![usize::MAX; k];
    let mut nodes: Vec<SpqrNode> = Vec::new();
    let mut raw: Vec<Vec<CEdge>> = Vec::new();
    for ci in 0..k {
        let r = find(&mut uf, ci);
        if node_of[r] == usize::MAX {
            node_of[r] = nodes.len();
            nodes.push(SpqrNode { kind: done[r].kind, edges: Vec::new() });
            raw.push(Vec::new());
        }
        node_of[ci] = node_of[r];
        for e in &done[ci].edges {
            if e.id >= m && dissolved[e.id] {
                continue;
            }
            raw[node_of[r]].push(*e);
        }
    }
    let mut home = vec![(0, 0); m];
    let mut vhome: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nids];
    for (ni, es) in raw.iter().enumerate() {
        for (j, e) in es.iter().enumerate() {
            if e.id < m {
                home[e.id] = (ni, j);
            } else {
                vhome[e.id].push((ni, j));
            }
        }
    }
    for (ni, es) in raw.iter().enumerate() {
        for e in es {
            let r = if e.id < m {
                SkelRef::Real(e.id)
            } else {
                let (a, b) = (vhome[e.id][0], vhome[e.id][1]);
                let (node, edge) = if a.0 == ni { b } else { a };
                SkelRef::Virtual { node, edge }
            };
            nodes[ni].edges.push(SkelEdge { u: e.u, v: e.v, r });
        }
    }
    SpqrTree { nodes, home, reference }
}

impl SpqrTree {
    /// The root node and its parent edge (the reference edge).
    pub fn root(&self) -> (usize, usize) {
        self.home[self.reference]
    }

    pub fn reroot(&self, e: EdgeId) -> Result<SpqrTree, SpqrError> {
        if e >= self.home.len() {
            return Err(SpqrError::UnknownEdge(e));
        }
        Ok(SpqrTree { reference: e, ..self.clone() })
    }

    /// Virtual edges of `node` other than `parent`, with the child node and
    /// the child's own parent edge.
    pub fn children(&self, node: usize, parent: usize) -> Vec<(usize, usize, usize)> {
        self.nodes[node]
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != parent)
            .filter_map(|(i, e)| match e.r {
                SkelRef::Virtual { node: c, edge: ce } => Some((i, c, ce)),
                SkelRef::Real(_) => None,
            })
            .collect()
    }

    /// Real edges of the pertinent graph of `node` seen from `parent`, and its poles.
    pub fn pertinent(&self, node: usize, parent: usize) -> (Vec<EdgeId>, (VertexId, VertexId)) {
        let pe = self.nodes[node].edges[parent];
        let mut out = Vec::new();
        let mut stack = vec![(node, parent)];
        while let Some((x, p)) = stack.pop() {
            for (i, e) in self.nodes[x].edges.iter().enumerate() {
                if i == p {
                    continue;
                }
                match e.r {
                    SkelRef::Real(r) => out.push(r),
                    SkelRef::Virtual { node, edge } => stack.push((node, edge)),
                }
            }
        }
        out.sort_unstable();
        (out, (pe.u, pe.v))
    }

    /// Skeleton edges of a cycle node in order from `s` around to the parent edge,
    /// each with the vertex it is entered from.
    pub fn cycle_order(&self, node: usize, parent: usize, s: VertexId) -> Vec<(usize, VertexId)> {
        let es = &self.nodes[node].edges;
        let mut order = Vec::new();
        let mut at = s;
        let mut prev = parent;
        loop {
            let next = (0..es.len()).find(|&i| i != prev && i != parent && (es[i].u == at || es[i].v == at) && !order.iter().any(|&(j, _)| j == i));
            let Some(i) = next else { break };
            order.push((i, at));
            at = if es[i].u == at { es[i].v } else { es[i].u };
            prev = i;
        }
        order
    }

    /// JSON dump: node kinds and skeleton edges, real edges as `Q` leaves.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let edges: Vec<serde_json::Value> = n
                    .edges
                    .iter()
                    .map(|e| match e.r {
                        SkelRef::Real(r) => serde_json::json!({ "ends": [e.u, e.v], "real": r }),
                        SkelRef::Virtual { node, .. } => serde_json::json!({ "ends": [e.u, e.v], "child": node }),
                    })
                    .collect();
                serde_json::json!({ "id": i, "kind": format!("{:?}", n.kind), "edges": edges })
            })
            .collect();
        serde_json::json!({ "reference": self.reference, "root": self.root().0, "nodes": nodes })
    }
}

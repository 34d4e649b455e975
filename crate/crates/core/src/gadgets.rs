//! Hardness gadgets and the instance transformations built from them.
//!
//! Vertex layout of the wheel `W4`: rim `v1..v4` are ids 0..3, center `u` is 4.
//! Bend gadget `B12`: the wheel plus `s` (5) and `t` (6) with inflexible edges
//! `s v1` and `t v2`; `v3 v4` has flexibility 2. Its outer path from `s` to `t`
//! is `s v1 v2 t`, the other side `t v2 v3 v4 v1 s` carries the free
//! incidences at `v3` and `v4`.
//!
//! In `W3'` the bend gadget on triangle edge `vi v(i+1)` has its long side
//! facing away from the center. `vi'` is joined to `vi` by an inflexible edge
//! and to the free incidence nearest to `vi` in each of the two bend gadgets
//! at `vi`: `v4` of the gadget starting at `vi` and `v3` of the gadget ending
//! there.

use crate::embedding::RotationSystem;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::model::{EdgeCost, Instance};
use crate::ortho::OrthoRep;
use crate::planar::planar_embedding;
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum Property {
    /// Achievable bend counts between the poles.
    BendSet(Vec<i32>),
    /// With the rim as outer face, the outer face is a rectangle with one
    /// attachment vertex on each side.
    RectangleOuter,
    /// Of the listed bend gadgets (by pole pair and edge set), two have one
    /// bend and one has two.
    OneTwoTwo(Vec<(VertexId, VertexId, Vec<EdgeId>)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetInstance {
    pub instance: Instance,
    pub attach: Vec<VertexId>,
    pub poles: Option<(VertexId, VertexId)>,
    pub properties: Vec<Property>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("vertex {0} has degree {1}, expected {2}")]
    Degree(VertexId, usize, usize),
    #[error("vertex {0} is a pole")]
    Pole(VertexId),
    #[error("instance is not planar")]
    NonPlanar,
    #[error("edge {0} has no flexibility")]
    NotFlex(EdgeId),
}

fn named(g: Graph, costs: Vec<EdgeCost>, vnames: &[&str]) -> Instance {
    let mut inst = Instance::new(g, costs);
    for (i, n) in vnames.iter().enumerate() {
        inst.vertex_names[i] = n.to_string();
    }
    inst
}

pub fn wheel_w4() -> GadgetInstance {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)];
    let g = Graph::from_edges(5, &edges);
    let inst = named(g, vec![EdgeCost::Flex(1); 8], &["v1", "v2", "v3", "v4", "u"]);
    GadgetInstance { instance: inst, attach: vec![0, 1, 2, 3], poles: None, properties: vec![Property::RectangleOuter] }
}

pub fn bend_gadget_b12() -> GadgetInstance {
    let mut inst = wheel_w4().instance;
    inst.costs[2] = EdgeCost::Flex(2);
    let s = inst.add_vertex();
    let t = inst.add_vertex();
    inst.vertex_names[s] = "s".into();
    inst.vertex_names[t] = "t".into();
    inst.add_edge(s, 0, EdgeCost::Flex(0));
    inst.add_edge(t, 1, EdgeCost::Flex(0));
    inst.poles = Some((s, t));
    GadgetInstance { instance: inst, attach: vec![s, t], poles: Some((s, t)), properties: vec![Property::BendSet(vec![1, 2])] }
}

/// Appends a copy of `B12` with its poles identified with `s` and `t`;
/// returns the copy's rim vertices `v1..v4` and its edges.
fn add_b12(inst: &mut Instance, s: VertexId, t: VertexId, tag: &str) -> ([VertexId; 4], Vec<EdgeId>) {
    let b = bend_gadget_b12().instance;
    let mut map = [0usize; 7];
    for x in 0..5 {
        map[x] = inst.add_vertex();
        inst.vertex_names[map[x]] = format!("{tag}.{}", b.vertex_names[x]);
    }
    map[5] = s;
    map[6] = t;
    let mut es = Vec::new();
    for (e, &[a, c]) in b.graph.edges().iter().enumerate() {
        let id = inst.add_edge(map[a], map[c], b.costs[e].clone());
        inst.edge_names[id] = format!("{tag}.e{e}");
        es.push(id);
    }
    ([map[0], map[1], map[2], map[3]], es)
}

pub fn w3_prime() -> GadgetInstance {
    let g = Graph::from_edges(4, &[(3, 0), (3, 1), (3, 2)]);
    let mut inst = named(g, vec![EdgeCost::Flex(1); 3], &["v1", "v2", "v3", "u"]);
    let mut rims = Vec::new();
    let mut gadgets = Vec::new();
    for i in 0..3 {
        let (rim, es) = add_b12(&mut inst, i, (i + 1) % 3, &format!("b{}", i + 1));
        rims.push(rim);
        gadgets.push((i, (i + 1) % 3, es));
    }
    let mut attach = Vec::new();
    for i in 0..3 {
        let p = inst.add_vertex();
        inst.vertex_names[p] = format!("v{}'", i + 1);
        inst.add_edge(i, p, EdgeCost::Flex(0));
        inst.add_edge(p, rims[i][3], EdgeCost::Flex(1));
        inst.add_edge(p, rims[(i + 2) % 3][2], EdgeCost::Flex(1));
        attach.push(p);
    }
    GadgetInstance { instance: inst, attach, poles: None, properties: vec![Property::OneTwoTwo(gadgets)] }
}

/// Cyclic order of the edges at `v` in the instance's (or a computed) embedding.
pub fn edge_order(inst: &Instance, v: VertexId) -> Result<Vec<EdgeId>, GadgetError> {
    let emb = match &inst.embedding {
        Some(e) => e.clone(),
        None => planar_embedding(&inst.graph).ok_or(GadgetError::NonPlanar)?,
    };
    Ok(emb.rotation(v).iter().map(|d| d.edge()).collect())
}

/// Replaces `v` by the gadget, attaching the edges of `order` to the
/// gadget's attachment vertices in turn. The embedding is dropped.
fn replace_vertex(inst: &Instance, v: VertexId, gad: &GadgetInstance, order: &[EdgeId]) -> Result<Instance, GadgetError> {
    if inst.poles.is_some_and(|(s, t)| s == v || t == v) {
        return Err(GadgetError::Pole(v));
    }
    let g = &inst.graph;
    let mut map = vec![usize::MAX; g.n()];
    let mut out = Instance::new(Graph::new(0), Vec::new());
    out.vertex_names.clear();
    for w in 0..g.n() {
        if w != v {
            map[w] = out.add_vertex();
            out.vertex_names[map[w]] = inst.vertex_names[w].clone();
        }
    }
    let h = &gad.instance;
    let mut gmap = vec![0; h.n()];
    for x in 0..h.n() {
        gmap[x] = out.add_vertex();
        out.vertex_names[gmap[x]] = format!("{}.{}", inst.vertex_names[v], h.vertex_names[x]);
    }
    for e in 0..g.m() {
        let (a, b) = g.endpoints(e);
        let end = |x: VertexId| {
            if x == v {
                gmap[gad.attach[order.iter().position(|&f| f == e).unwrap()]]
            } else {
                map[x]
            }
        };
        let id = out.add_edge(end(a), end(b), inst.costs[e].clone());
        out.edge_names[id] = inst.edge_names[e].clone();
    }
    for e in 0..h.m() {
        let (a, b) = h.graph.endpoints(e);
        let id = out.add_edge(gmap[a], gmap[b], h.costs[e].clone());
        out.edge_names[id] = format!("{}.{}", inst.vertex_names[v], h.edge_names[e]);
    }
    out.poles = inst.poles.map(|(s, t)| (map[s], map[t]));
    out.restrict_90 = inst.restrict_90.iter().filter(|&&w| w != v).map(|&w| map[w]).collect();
    Ok(out)
}

pub fn expand_deg3(inst: &Instance, v: VertexId) -> Result<Instance, GadgetError> {
    let d = inst.graph.degree(v);
    if d != 3 {
        return Err(GadgetError::Degree(v, d, 3));
    }
    replace_vertex(inst, v, &w3_prime(), &edge_order(inst, v)?)
}

pub fn expand_deg4(inst: &Instance, v: VertexId) -> Result<Instance, GadgetError> {
    let d = inst.graph.degree(v);
    if d != 4 {
        return Err(GadgetError::Degree(v, d, 4));
    }
    replace_vertex(inst, v, &wheel_w4(), &edge_order(inst, v)?)
}

/// Replaces every edge of flexibility f > 1 by `W4` with `s v1` (flex 1) and
/// `t v3` (flex f - 1), repeating until every flexibility is 0 or 1.
pub fn reduce_flex(inst: &Instance) -> Result<Instance, GadgetError> {
    let mut cur = inst.clone();
    cur.embedding = None;
    while let Some(e) = cur.costs.iter().position(|c| c.flex().is_some_and(|f| f > 1)) {
        let f = cur.costs[e].flex().unwrap();
        let (s, t) = cur.graph.endpoints(e);
        let name = cur.edge_names[e].clone();
        let w = wheel_w4().instance;
        let mut out = Instance::new(Graph::new(0), Vec::new());
        out.vertex_names.clear();
        for x in 0..cur.n() {
            let id = out.add_vertex();
            out.vertex_names[id] = cur.vertex_names[x].clone();
        }
        for x in 0..cur.m() {
            if x != e {
                let (a, b) = cur.graph.endpoints(x);
                let id = out.add_edge(a, b, cur.costs[x].clone());
                out.edge_names[id] = cur.edge_names[x].clone();
            }
        }
        let base = out.n();
        for x in 0..w.n() {
            let id = out.add_vertex();
            out.vertex_names[id] = format!("{name}.{}", w.vertex_names[x]);
        }
        for x in 0..w.m() {
            let (a, b) = w.graph.endpoints(x);
            let id = out.add_edge(base + a, base + b, EdgeCost::Flex(1));
            out.edge_names[id] = format!("{name}.e{x}");
        }
        let id = out.add_edge(s, base, EdgeCost::Flex(1));
        out.edge_names[id] = format!("{name}.s");
        let id = out.add_edge(t, base + 2, EdgeCost::Flex(f - 1));
        out.edge_names[id] = format!("{name}.t");
        out.poles = cur.poles;
        out.restrict_90 = cur.restrict_90.clone();
        cur = out;
    }
    if let Some(e) = cur.costs.iter().position(|c| c.flex().is_none()) {
        return Err(GadgetError::NotFlex(e));
    }
    Ok(cur)
}

/// Each round expands both endpoints of every inflexible edge by `W4`.
/// Endpoints of other degrees and poles are left alone.
pub fn amplify(inst: &Instance, rounds: usize) -> Result<Instance, GadgetError> {
    let mut cur = inst.clone();
    for _ in 0..rounds {
        let names: Vec<String> = (0..cur.m()).filter(|&e| cur.costs[e].is_inflexible()).map(|e| cur.edge_names[e].clone()).collect();
        for name in names {
            for side in 0..2 {
                let e = cur.edge_names.iter().position(|n| *n == name).unwrap();
                let v = if side == 0 { cur.graph.endpoints(e).0 } else { cur.graph.endpoints(e).1 };
                let pole = cur.poles.is_some_and(|(s, t)| s == v || t == v);
                if cur.graph.degree(v) == 4 && !pole {
                    cur = expand_deg4(&cur, v)?;
                }
            }
        }
    }
    Ok(cur)
}

/// Smallest distance between endpoints of two distinct inflexible edges
/// (`None` with fewer than two inflexible edges).
pub fn inflexible_distance(inst: &Instance) -> Option<usize> {
    let g = &inst.graph;
    let inflex: Vec<EdgeId> = (0..g.m()).filter(|&e| inst.costs[e].is_inflexible()).collect();
    let mut best: Option<usize> = None;
    for (i, &a) in inflex.iter().enumerate() {
        let (x, y) = g.endpoints(a);
        let mut dist = vec![usize::MAX; g.n()];
        let mut q = VecDeque::new();
        for s in [x, y] {
            dist[s] = 0;
            q.push_back(s);
        }
        while let Some(u) = q.pop_front() {
            for w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        for &b in &inflex[i + 1..] {
            let (p, r) = g.endpoints(b);
            let d = dist[p].min(dist[r]);
            best = Some(best.map_or(d, |c| c.min(d)));
        }
    }
    best
}

/// Outer face is a rectangle (rotation −1 at exactly four places, no reflex
/// turn) with exactly one of `attach` on the interior of each side.
pub fn outer_is_rectangle(r: &OrthoRep, attach: &[VertexId]) -> bool {
    let g = &r.graph;
    let want: BTreeSet<VertexId> = attach.iter().copied().collect();
    let cyc = &r.faces.cycles[r.faces.outer];
    // Events along the boundary: Some(v) for an attachment vertex passed straight, None for a corner.
    let mut events: Vec<Option<VertexId>> = Vec::new();
    for &d in cyc {
        let rd = r.rot_dart[d.idx()];
        if rd > 0 {
            return false;
        }
        for _ in 0..(-rd) {
            events.push(None);
        }
        let v = g.head(d);
        match r.rot_corner[d.idx()] {
            0 if want.contains(&v) => events.push(Some(v)),
            0 => {}
            -1 => events.push(None),
            _ => return false,
        }
    }
    let corners = events.iter().filter(|e| e.is_none()).count();
    if corners != 4 {
        return false;
    }
    let k = events.iter().position(|e| e.is_none()).unwrap();
    let mut seen = BTreeSet::new();
    let mut on_side = 0;
    for i in 1..=events.len() {
        match events[(k + i) % events.len()] {
            Some(v) => {
                on_side += 1;
                seen.insert(v);
            }
            None => {
                if on_side != 1 {
                    return false;
                }
                on_side = 0;
            }
        }
    }
    seen == want
}

/// The rotation system of `W3'` with the face through all `vi'` outside.
pub fn w3_prime_embedding(gi: &GadgetInstance) -> Option<RotationSystem> {
    let g = &gi.instance.graph;
    let emb = planar_embedding(g)?;
    let faces = emb.faces(g);
    let f = (0..faces.len()).find(|&f| {
        let vs: BTreeSet<VertexId> = faces.cycles[f].iter().map(|&d| g.tail(d)).collect();
        gi.attach.iter().all(|a| vs.contains(a))
    })?;
    Some(emb.with_outer(faces.cycles[f][0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;

    #[test]
    fn shapes_and_degrees() {
        let w = wheel_w4();
        assert_eq!((w.instance.n(), w.instance.m()), (5, 8));
        assert_eq!(w.instance.graph.degree(4), 4);
        assert!((0..4).all(|v| w.instance.graph.degree(v) == 3));
        let b = bend_gadget_b12();
        assert_eq!((b.instance.n(), b.instance.m()), (7, 10));
        let w3 = w3_prime();
        assert!(validate_instance(&w3.instance).is_empty());
        let g = &w3.instance.graph;
        for e in 0..g.m() {
            if w3.instance.costs[e].is_inflexible() {
                let (a, c) = g.endpoints(e);
                let deg = |v| g.degree(v) + usize::from(w3.attach.contains(&v));
                assert_eq!((deg(a), deg(c)), (4, 4), "edge {}", w3.instance.edge_names[e]);
            }
        }
        assert!(w3_prime_embedding(&w3).is_some());
    }

    #[test]
    fn reduce_flex_chain() {
        let inst = Instance::from_edges(2, &[(0, 1)], 3);
        let r = reduce_flex(&inst).unwrap();
        assert!(r.costs.iter().all(|c| c.flex().unwrap() <= 1));
        assert_eq!(r.n(), 2 + 5 * 2);
        let one = Instance::from_edges(3, &[(0, 1), (1, 2), (2, 0)], 1);
        assert_eq!(reduce_flex(&one).unwrap(), one);
    }

    #[test]
    fn expansions_make_degree_four() {
        let k4 = Instance::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 1);
        let x = expand_deg3(&k4, 0).unwrap();
        assert!(validate_instance(&x).is_empty());
        for v in ["v1", "v2", "v3"] {
            let id = x.vertex_by_name(v).unwrap();
            assert_eq!(x.graph.degree(id), 3);
        }
        for a in ["v0.v1'", "v0.v2'", "v0.v3'"] {
            assert_eq!(x.graph.degree(x.vertex_by_name(a).unwrap()), 4);
        }
        assert_eq!(expand_deg4(&k4, 0).unwrap_err(), GadgetError::Degree(0, 3, 4));
    }
}

//! The network of a planar embedding whose feasible flows are exactly its
//! orthogonal representations.
//!
//! One node per vertex, face and edge. A dart arc runs from its edge node to
//! the face on its right and carries the dart's rotation; a corner arc runs
//! from a vertex node to the face of the corner and carries its rotation.
//! Face nodes absorb 4 (−4 for the outer face), edge nodes σ+τ−2 and vertex
//! nodes 4−Σ(σ+1).

use super::network::{extremize, ArcId, Network, NodeId};
use crate::embedding::{Faces, RotationSystem};
use crate::graph::{Dart, Graph, VertexId};
use crate::model::EdgeCost;
use crate::ortho::OrthoRep;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("vertex {0} has more than four occupied incidences")]
    WidthOverflow(VertexId),
    #[error("cost table of edge {0} is not convex")]
    NonConvex(usize),
    #[error("flow does not fit the network")]
    Mismatch,
}

/// Outer corners of the poles pinned to σ−3 and τ−3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolePins {
    pub s: VertexId,
    pub t: VertexId,
    pub sigma: u8,
    pub tau: u8,
}

#[derive(Clone, Debug)]
pub struct RepNetwork {
    pub net: Network,
    pub graph: Graph,
    pub emb: RotationSystem,
    pub faces: Faces,
    pub widths: Vec<(u8, u8)>,
    pub vertex_node: Vec<NodeId>,
    pub face_node: Vec<NodeId>,
    pub edge_node: Vec<NodeId>,
    /// Per dart: the arc carrying its rotation.
    pub dart_arc: Vec<ArcId>,
    /// Per corner key (entering dart): the arc carrying the corner's rotation.
    pub corner_arc: Vec<ArcId>,
}

/// Rotation bounds of each forward dart given a bend limit per edge.
pub fn dart_bounds(widths: &[(u8, u8)], limits: &[u32]) -> Vec<(i64, i64)> {
    widths
        .iter()
        .zip(limits)
        .map(|(&(s, t), &b)| {
            let c = 2 - s as i64 - t as i64;
            (-(b as i64), b as i64 + c)
        })
        .collect()
}

/// Bend limits from costs, with unbounded edges capped at `cap`.
pub fn bend_limits(costs: &[EdgeCost], cap: u32) -> Vec<u32> {
    costs.iter().map(|c| c.max_bends().map_or(cap, |b| b.min(cap))).collect()
}

pub fn build_network(
    g: &Graph,
    emb: &RotationSystem,
    widths: &[(u8, u8)],
    bounds: &[(i64, i64)],
    pins: Option<PolePins>,
) -> Result<RepNetwork, NetworkError> {
    let faces = emb.faces(g);
    let mut net = Network::new();
    let mut vertex_node = Vec::with_capacity(g.n());
    let occ_tail = |d: Dart| if d.is_forward() { widths[d.edge()].0 } else { widths[d.edge()].1 };
    for v in 0..g.n() {
        let occ: i64 = g.out_darts(v).iter().map(|&d| occ_tail(d) as i64).sum();
        if occ > 4 {
            return Err(NetworkError::WidthOverflow(v));
        }
        let d = if g.degree(v) == 0 { 0 } else { 4 - occ - g.degree(v) as i64 };
        vertex_node.push(net.add_node(d, format!("v{v}")));
    }
    let face_node: Vec<NodeId> = (0..faces.len())
        .map(|f| net.add_node(if f == faces.outer { -4 } else { 4 }, format!("f{f}")))
        .collect();
    let edge_node: Vec<NodeId> = (0..g.m())
        .map(|e| net.add_node(widths[e].0 as i64 + widths[e].1 as i64 - 2, format!("e{e}")))
        .collect();
    let mut dart_arc = vec![0; 2 * g.m()];
    for e in 0..g.m() {
        let c = 2 - widths[e].0 as i64 - widths[e].1 as i64;
        let (lo, hi) = bounds[e];
        let f = Dart::new(e, false);
        dart_arc[f.idx()] = net.add_arc(edge_node[e], face_node[faces.face(f)], lo, hi);
        let b = f.rev();
        dart_arc[b.idx()] = net.add_arc(edge_node[e], face_node[faces.face(b)], c - hi, c - lo);
    }
    let mut corner_arc = vec![0; 2 * g.m()];
    for i in 0..2 * g.m() {
        let x = Dart(i as u32);
        let v = g.head(x);
        corner_arc[i] = net.add_arc(vertex_node[v], face_node[faces.face(x)], -2, 1);
    }
    let mut rn = RepNetwork {
        net,
        graph: g.clone(),
        emb: emb.clone(),
        faces,
        widths: widths.to_vec(),
        vertex_node,
        face_node,
        edge_node,
        dart_arc,
        corner_arc,
    };
    if let Some(p) = pins {
        rn.pin_poles(p);
    }
    Ok(rn)
}

/// The network of a plain graph with its own bend limits and optional convex costs.
pub fn network_for_costs(
    g: &Graph,
    emb: &RotationSystem,
    costs: &[EdgeCost],
    cap: u32,
    with_costs: bool,
) -> Result<RepNetwork, NetworkError> {
    let widths = vec![(1u8, 1u8); g.m()];
    let limits = bend_limits(costs, cap);
    let mut rn = build_network(g, emb, &widths, &dart_bounds(&widths, &limits), None)?;
    if with_costs {
        for (e, c) in costs.iter().enumerate() {
            if !c.is_convex() {
                return Err(NetworkError::NonConvex(e));
            }
            // The forward arc carries the whole cost: bends = |rotation| for thin edges.
            let b = limits[e] as i64;
            let marg: Vec<f64> = (-b..b)
                .map(|x| c.cost((x + 1).unsigned_abs() as u32) - c.cost(x.unsigned_abs() as u32))
                .collect();
            rn.net.arcs[rn.dart_arc[2 * e]].marginal = marg;
            rn.net.base_cost += c.cost(b as u32);
        }
    }
    Ok(rn)
}

impl RepNetwork {
    pub fn pin_poles(&mut self, p: PolePins) {
        self.pin_pole(p.s, p.sigma as i64 - 3);
        self.pin_pole(p.t, p.tau as i64 - 3);
    }

    fn pin_pole(&mut self, v: VertexId, value: i64) {
        let outer = self.faces.outer;
        if let Some(&x) = self.faces.cycles[outer].iter().find(|&&d| self.graph.head(d) == v) {
            let a = &mut self.net.arcs[self.corner_arc[x.idx()]];
            a.lo = value;
            a.hi = value;
        }
    }

    /// Pins the rotation of a dart to `[lo, hi]`, adjusting its twin.
    pub fn bound_dart(&mut self, d: Dart, lo: i64, hi: i64) {
        let e = d.edge();
        let c = 2 - self.widths[e].0 as i64 - self.widths[e].1 as i64;
        let a = &mut self.net.arcs[self.dart_arc[d.idx()]];
        a.lo = a.lo.max(lo);
        a.hi = a.hi.min(hi);
        let (nlo, nhi) = (a.lo, a.hi);
        let b = &mut self.net.arcs[self.dart_arc[d.rev().idx()]];
        b.lo = b.lo.max(c - nhi);
        b.hi = b.hi.min(c - nlo);
    }

    pub fn flow_to_rep(&self, flow: &[i64]) -> OrthoRep {
        let nd = 2 * self.graph.m();
        let rot_dart = (0..nd).map(|i| flow[self.dart_arc[i]] as i32).collect();
        let rot_corner = (0..nd).map(|i| flow[self.corner_arc[i]] as i32).collect();
        OrthoRep::new(self.graph.clone(), self.emb.clone(), self.widths.clone(), rot_dart, rot_corner)
    }

    pub fn rep_to_flow(&self, r: &OrthoRep) -> Result<Vec<i64>, NetworkError> {
        if r.graph.m() != self.graph.m() || r.graph.n() != self.graph.n() || r.emb.rotations() != self.emb.rotations() {
            return Err(NetworkError::Mismatch);
        }
        let mut flow = vec![0i64; self.net.arcs.len()];
        for i in 0..2 * self.graph.m() {
            flow[self.dart_arc[i]] = r.rot_dart[i] as i64;
            flow[self.corner_arc[i]] = r.rot_corner[i] as i64;
        }
        Ok(flow)
    }

    /// Splits the outer face so the π(s,t) incidences feed a separate node and
    /// returns the network with the bridge arc carrying rot(π(s,t)).
    pub fn split_outer(&self, s: VertexId, t: VertexId) -> Option<(Network, ArcId)> {
        let g = &self.graph;
        let outer = self.faces.outer;
        let cyc = &self.faces.cycles[outer];
        let start = cyc.iter().position(|&d| g.tail(d) == s)?;
        let mut walk = Vec::new();
        for i in 0..cyc.len() {
            let d = cyc[(start + i) % cyc.len()];
            walk.push(d);
            if g.head(d) == t {
                break;
            }
        }
        if g.head(*walk.last()?) != t {
            return None;
        }
        let mut net = self.net.clone();
        let a = net.add_node(0, "outer-st");
        let b = self.face_node[outer];
        for (i, d) in walk.iter().enumerate() {
            net.arcs[self.dart_arc[d.idx()]].to = a;
            if i + 1 < walk.len() {
                net.arcs[self.corner_arc[d.idx()]].to = a;
            }
        }
        let big = 8 * (g.m() as i64 + 4) * 4 + 64;
        let bridge = net.add_arc(a, b, -big, big);
        Some((net, bridge))
    }

    /// Achievable range of rot(π(s,t)); every integer inside is attainable.
    pub fn rotation_range(&self, s: VertexId, t: VertexId) -> Option<(i64, i64)> {
        let (net, bridge) = self.split_outer(s, t)?;
        extremize(&net, bridge)
    }
}

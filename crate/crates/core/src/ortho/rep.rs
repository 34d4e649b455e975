//! Orthogonal representations with thick edges.
//!
//! `rot_dart[d]` is the rotation of edge `d.edge()` seen from the face to the
//! right of `d`. `rot_corner[x]` belongs to the corner at `head(x)` that the
//! face of `x` passes through right after `x`, that is, between `rev(x)` and its
//! rotation successor. A right turn counts +1, so inner faces sum to 4 and the
//! outer face to -4.

use crate::embedding::{Faces, RotationSystem};
use crate::graph::{Dart, EdgeId, Graph, VertexId};
use crate::model::EdgeCost;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct OrthoRep {
    pub graph: Graph,
    pub emb: RotationSystem,
    pub faces: Faces,
    /// Occupied incidences (at `edges[e][0]`, at `edges[e][1]`).
    pub widths: Vec<(u8, u8)>,
    pub rot_dart: Vec<i32>,
    pub rot_corner: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RepViolation {
    #[error("table sizes do not match the graph")]
    Shape,
    #[error("embedding is not planar")]
    NotPlanar,
    #[error("face {face}: rotation sum {sum}, expected {expected}")]
    FaceSum { face: usize, sum: i32, expected: i32 },
    #[error("edge {edge}: rotation sum {sum}, expected {expected}")]
    EdgeSum { edge: EdgeId, sum: i32, expected: i32 },
    #[error("vertex {vertex}: rotation sum {sum}, expected {expected}")]
    VertexSum { vertex: VertexId, sum: i32, expected: i32 },
    #[error("corner after dart {0}: rotation {1} outside [-2, 1]")]
    CornerRange(u32, i32),
    #[error("vertex {0}: {1} occupied incidences")]
    Occupancy(VertexId, u32),
    #[error("edge {edge}: {bends} bends exceed its cost domain")]
    Cost { edge: EdgeId, bends: u32 },
}

pub fn beta_low(sigma: u8, tau: u8) -> i32 {
    (sigma as i32 + tau as i32 + 1) / 2 - 1
}

impl OrthoRep {
    pub fn new(graph: Graph, emb: RotationSystem, widths: Vec<(u8, u8)>, rot_dart: Vec<i32>, rot_corner: Vec<i32>) -> Self {
        let faces = emb.faces(&graph);
        OrthoRep { graph, emb, faces, widths, rot_dart, rot_corner }
    }

    pub fn plain(graph: Graph, emb: RotationSystem, rot_dart: Vec<i32>, rot_corner: Vec<i32>) -> Self {
        let m = graph.m();
        OrthoRep::new(graph, emb, vec![(1, 1); m], rot_dart, rot_corner)
    }

    pub fn outer_face(&self) -> usize {
        self.faces.outer
    }

    /// Occupied incidences of `e` at endpoint `v`.
    pub fn occupancy(&self, e: EdgeId, v: VertexId) -> u8 {
        if self.graph.edges()[e][0] == v {
            self.widths[e].0
        } else {
            self.widths[e].1
        }
    }

    /// Occupancy at the tail of `d`.
    pub fn occ_tail(&self, d: Dart) -> u8 {
        if d.is_forward() {
            self.widths[d.edge()].0
        } else {
            self.widths[d.edge()].1
        }
    }

    pub fn validate(&self) -> Vec<RepViolation> {
        let g = &self.graph;
        let nd = 2 * g.m();
        if self.rot_dart.len() != nd || self.rot_corner.len() != nd || self.widths.len() != g.m() {
            return vec![RepViolation::Shape];
        }
        let mut out = Vec::new();
        if self.emb.check_planar(g).is_err() {
            out.push(RepViolation::NotPlanar);
        }
        for (fi, cyc) in self.faces.cycles.iter().enumerate() {
            if cyc.is_empty() {
                continue;
            }
            let sum: i32 = cyc.iter().map(|d| self.rot_dart[d.idx()] + self.rot_corner[d.idx()]).sum();
            let expected = if fi == self.faces.outer { -4 } else { 4 };
            if sum != expected {
                out.push(RepViolation::FaceSum { face: fi, sum, expected });
            }
        }
        for e in 0..g.m() {
            let (s, t) = self.widths[e];
            let sum = self.rot_dart[2 * e] + self.rot_dart[2 * e + 1];
            let expected = 2 - (s as i32 + t as i32);
            if sum != expected {
                out.push(RepViolation::EdgeSum { edge: e, sum, expected });
            }
        }
        for v in 0..g.n() {
            let out_d = g.out_darts(v);
            if out_d.is_empty() {
                continue;
            }
            let occ: u32 = out_d.iter().map(|&d| self.occ_tail(d) as u32).sum();
            if occ > 4 {
                out.push(RepViolation::Occupancy(v, occ));
            }
            let sum: i32 = out_d.iter().map(|d| self.rot_corner[d.rev().idx()]).sum();
            let expected = occ as i32 + out_d.len() as i32 - 4;
            if sum != expected {
                out.push(RepViolation::VertexSum { vertex: v, sum, expected });
            }
        }
        for (i, &c) in self.rot_corner.iter().enumerate() {
            if !(-2..=1).contains(&c) {
                out.push(RepViolation::CornerRange(i as u32, c));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Bend count of an edge: max of the two negated side rotations.
    pub fn bends(&self, e: EdgeId) -> u32 {
        (-self.rot_dart[2 * e]).max(-self.rot_dart[2 * e + 1]).max(0) as u32
    }

    pub fn cost(&self, costs: &[EdgeCost]) -> f64 {
        (0..self.graph.m()).map(|e| costs[e].cost(self.bends(e))).sum()
    }

    /// Edges whose bends fall outside their cost domain.
    pub fn validate_costs(&self, costs: &[EdgeCost]) -> Vec<RepViolation> {
        (0..self.graph.m())
            .filter(|&e| costs[e].cost(self.bends(e)).is_infinite())
            .map(|e| RepViolation::Cost { edge: e, bends: self.bends(e) })
            .collect()
    }

    /// Dart entering `v` on the outer face (keys the outer corner at `v`).
    pub fn outer_entry(&self, v: VertexId) -> Option<Dart> {
        self.faces.cycles[self.faces.outer].iter().copied().find(|&d| self.graph.head(d) == v)
    }

    /// π(s,t): the outer-face walk from the dart after s's outer corner to t.
    pub fn pi(&self, s: VertexId, t: VertexId) -> Option<Vec<Dart>> {
        let cyc = &self.faces.cycles[self.faces.outer];
        let k = cyc.len();
        let start = cyc.iter().position(|&d| self.graph.tail(d) == s)?;
        let mut walk = Vec::new();
        for i in 0..k {
            let d = cyc[(start + i) % k];
            walk.push(d);
            if self.graph.head(d) == t {
                return Some(walk);
            }
        }
        None
    }

    /// Sum of edge rotations and interior corner rotations along a face walk.
    pub fn rot_path(&self, walk: &[Dart]) -> i32 {
        let mut r = 0;
        for (i, d) in walk.iter().enumerate() {
            r += self.rot_dart[d.idx()];
            if i + 1 < walk.len() {
                r += self.rot_corner[d.idx()];
            }
        }
        r
    }

    /// (β, σ, τ) for poles on the outer face.
    pub fn bends_st(&self, s: VertexId, t: VertexId) -> Option<(i32, u8, u8)> {
        let r1 = self.rot_path(&self.pi(s, t)?);
        let r2 = self.rot_path(&self.pi(t, s)?);
        let sigma = self.rot_corner[self.outer_entry(s)?.idx()] + 3;
        let tau = self.rot_corner[self.outer_entry(t)?.idx()] + 3;
        Some((r1.abs().max(r2.abs()), sigma as u8, tau as u8))
    }

    /// Reflection of the drawing; faces keep their rotations.
    pub fn mirror(&self) -> OrthoRep {
        let g = &self.graph;
        let emb = self.emb.mirror(g);
        let nd = 2 * g.m();
        let mut rd = vec![0; nd];
        let mut rc = vec![0; nd];
        for i in 0..nd {
            let d = Dart(i as u32);
            rd[d.rev().idx()] = self.rot_dart[i];
            let nx = self.emb.next_in_face(g, d);
            rc[nx.rev().idx()] = self.rot_corner[i];
        }
        OrthoRep::new(g.clone(), emb, self.widths.clone(), rd, rc)
    }

    /// Rotation darts at `v` starting right after the outer corner.
    pub fn darts_after_outer(&self, v: VertexId) -> Option<Vec<Dart>> {
        let x = self.outer_entry(v)?;
        let list = self.emb.rotation(v);
        let start = list.iter().position(|&d| d == x.rev())?;
        let k = list.len();
        Some((1..=k).map(|i| list[(start + i) % k]).collect())
    }

    /// Representation of the subgraph formed by `keep` (vertices renumbered in
    /// increasing order of their original ids). Corners merge across removed
    /// edges. Returns the sub-representation and the original id per new vertex.
    pub fn restrict_to(&self, keep: &[EdgeId]) -> (OrthoRep, Vec<VertexId>) {
        let g = &self.graph;
        let mut kept = vec![false; g.m()];
        for &e in keep {
            kept[e] = true;
        }
        let mut vid = vec![usize::MAX; g.n()];
        let mut origin = Vec::new();
        for v in 0..g.n() {
            if g.out_darts(v).iter().any(|d| kept[d.edge()]) {
                vid[v] = origin.len();
                origin.push(v);
            }
        }
        let mut eid = vec![usize::MAX; g.m()];
        let mut h = Graph::new(origin.len());
        let mut widths = Vec::new();
        for e in 0..g.m() {
            if kept[e] {
                let (a, b) = g.endpoints(e);
                eid[e] = h.add_edge(vid[a], vid[b]);
                widths.push(self.widths[e]);
            }
        }
        let map = |d: Dart| Dart::new(eid[d.edge()], !d.is_forward());
        let mut rot = vec![Vec::new(); h.n()];
        let mut rc = vec![0; 2 * h.m()];
        for &v in &origin {
            let list = self.emb.rotation(v);
            let k = list.len();
            let first = list.iter().position(|d| kept[d.edge()]).unwrap();
            let mut i = first;
            loop {
                let d = list[i];
                rot[vid[v]].push(map(d));
                // Merge corners until the next kept dart.
                let mut sum = 0;
                let mut j = i;
                loop {
                    sum += self.rot_corner[list[j].rev().idx()];
                    j = (j + 1) % k;
                    if kept[list[j].edge()] {
                        break;
                    }
                    sum -= 2;
                }
                rc[map(d).rev().idx()] = sum;
                i = j;
                if i == first {
                    break;
                }
            }
        }
        let mut rd = vec![0; 2 * h.m()];
        for e in 0..g.m() {
            if kept[e] {
                rd[2 * eid[e]] = self.rot_dart[2 * e];
                rd[2 * eid[e] + 1] = self.rot_dart[2 * e + 1];
            }
        }
        // Old faces merge across removed edges; the outer class stays outer.
        let mut uf: Vec<usize> = (0..self.faces.len()).collect();
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
        for e in 0..g.m() {
            if !kept[e] {
                let a = find(&mut uf, self.faces.face(Dart::new(e, false)));
                let b = find(&mut uf, self.faces.face(Dart::new(e, true)));
                uf[a] = b;
            }
        }
        let outer_class = find(&mut uf, self.faces.outer);
        let mut outer = None;
        for e in 0..g.m() {
            if kept[e] {
                for back in [false, true] {
                    let d = Dart::new(e, back);
                    if outer.is_none() && find(&mut uf, self.faces.face(d)) == outer_class {
                        outer = Some(map(d));
                    }
                }
            }
        }
        let emb = RotationSystem::new(&h, rot, outer).expect("restricted rotation system");
        (OrthoRep::new(h, emb, widths, rd, rc), origin)
    }
}

/// Where an edge of a substituted representation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrigin {
    Outer(EdgeId),
    Inner(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstituteError {
    #[error("thick edge widths {0:?} differ from the substitute's {1:?}")]
    Widths((u8, u8), (u8, u8)),
    #[error("thick edge rotation {0} differs from the substitute's {1}")]
    Rotation(i32, i32),
    #[error("poles are not on the substitute's outer face")]
    Poles,
}

/// Replaces the thick edge `e` of `outer` by the st-graph representation `sub`
/// with poles `s` (at `e`'s first endpoint) and `t`.
pub fn substitute(
    outer: &OrthoRep,
    e: EdgeId,
    sub: &OrthoRep,
    s: VertexId,
    t: VertexId,
) -> Result<(OrthoRep, Vec<EdgeOrigin>, Vec<VertexId>), SubstituteError> {
    let (_, sg, tg) = sub.bends_st(s, t).ok_or(SubstituteError::Poles)?;
    if outer.widths[e] != (sg, tg) {
        return Err(SubstituteError::Widths(outer.widths[e], (sg, tg)));
    }
    let r_sub = sub.rot_path(&sub.pi(s, t).ok_or(SubstituteError::Poles)?);
    if outer.rot_dart[2 * e] != r_sub {
        return Err(SubstituteError::Rotation(outer.rot_dart[2 * e], r_sub));
    }
    let g = &outer.graph;
    let h = &sub.graph;
    let (u, v) = g.endpoints(e);
    // Vertex ids: outer vertices keep theirs; sub's inner vertices are appended.
    let mut vmap = vec![usize::MAX; h.n()];
    let mut nv = g.n();
    let mut vertex_origin: Vec<VertexId> = (0..g.n()).collect();
    for x in 0..h.n() {
        vmap[x] = if x == s {
            u
        } else if x == t {
            v
        } else {
            nv += 1;
            vertex_origin.push(usize::MAX);
            nv - 1
        };
    }
    let mut ng = Graph::new(nv);
    let mut origin = Vec::new();
    let mut emap_outer = vec![usize::MAX; g.m()];
    for f in 0..g.m() {
        if f != e {
            let (a, b) = g.endpoints(f);
            emap_outer[f] = ng.add_edge(a, b);
            origin.push(EdgeOrigin::Outer(f));
        }
    }
    let mut emap_inner = vec![usize::MAX; h.m()];
    for f in 0..h.m() {
        let (a, b) = h.endpoints(f);
        emap_inner[f] = ng.add_edge(vmap[a], vmap[b]);
        origin.push(EdgeOrigin::Inner(f));
    }
    let mo = |d: Dart| Dart::new(emap_outer[d.edge()], !d.is_forward());
    let mi = |d: Dart| Dart::new(emap_inner[d.edge()], !d.is_forward());
    let at_s: Vec<Dart> = sub.darts_after_outer(s).ok_or(SubstituteError::Poles)?.into_iter().map(mi).collect();
    let at_t: Vec<Dart> = sub.darts_after_outer(t).ok_or(SubstituteError::Poles)?.into_iter().map(mi).collect();
    let expand = |p: Dart| -> Vec<Dart> {
        if p.edge() == e {
            if p.is_forward() {
                at_s.clone()
            } else {
                at_t.clone()
            }
        } else {
            vec![mo(p)]
        }
    };
    let mut rot = vec![Vec::new(); nv];
    for w in 0..g.n() {
        for &p in outer.emb.rotation(w) {
            rot[w].extend(expand(p));
        }
    }
    for x in 0..h.n() {
        if x != s && x != t {
            rot[vmap[x]] = sub.emb.rotation(x).iter().map(|&d| mi(d)).collect();
        }
    }
    let nd = 2 * ng.m();
    let mut rd = vec![0; nd];
    let mut rc = vec![0; nd];
    let mut widths = vec![(1, 1); ng.m()];
    for f in 0..g.m() {
        if f == e {
            continue;
        }
        widths[emap_outer[f]] = outer.widths[f];
        for back in [false, true] {
            let d = Dart::new(f, back);
            rd[mo(d).idx()] = outer.rot_dart[d.idx()];
        }
    }
    for f in 0..h.m() {
        widths[emap_inner[f]] = sub.widths[f];
        for back in [false, true] {
            let d = Dart::new(f, back);
            rd[mi(d).idx()] = sub.rot_dart[d.idx()];
        }
    }
    let pole_keys = [sub.outer_entry(s), sub.outer_entry(t)];
    for i in 0..2 * h.m() {
        let d = Dart(i as u32);
        if !pole_keys.contains(&Some(d)) {
            rc[mi(d).idx()] = sub.rot_corner[i];
        }
    }
    for i in 0..2 * g.m() {
        let x = Dart(i as u32);
        let key = expand(x.rev()).last().unwrap().rev();
        rc[key.idx()] = outer.rot_corner[i];
    }
    let od = outer.emb.outer_dart().map(|o| if o.edge() == e { expand(o)[0] } else { mo(o) });
    let emb = RotationSystem::new(&ng, rot, od).expect("substituted rotation system");
    let rep = OrthoRep::new(ng, emb, widths, rd, rc);
    Ok((rep, origin, vertex_origin))
}

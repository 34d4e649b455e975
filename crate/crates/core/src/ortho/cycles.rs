//! Valid dual edges, valid cycles through the outer face, and bending.

use super::rep::{OrthoRep, RepViolation};
use crate::graph::{Dart, VertexId};
use crate::model::EdgeCost;
use std::collections::{HashSet, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    /// The edge itself can take another bend towards the target face.
    Edge,
    /// The corner of this vertex in the target face may still open up.
    Vertex(VertexId),
}

/// One dual edge: moves a rotation unit from face `from` to face `to` across
/// the edge of `dart`, where `dart` borders `from` and `rev(dart)` borders `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DualArc {
    pub from: usize,
    pub to: usize,
    pub dart: Dart,
    pub why: Justification,
}

impl DualArc {
    /// (lowered key, raised key): darts for `Edge`, corner keys for `Vertex`.
    fn keys(&self, r: &OrthoRep) -> (Dart, Dart) {
        let g = &r.graph;
        let x = self.dart;
        match self.why {
            Justification::Edge => (x, x.rev()),
            Justification::Vertex(v) if v == g.head(x) => (x, r.emb.pred(g, x.rev()).rev()),
            Justification::Vertex(_) => (r.emb.pred(g, x).rev(), x.rev()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidCycle {
    pub arcs: Vec<DualArc>,
}

fn cap(c: &EdgeCost) -> i32 {
    c.max_bends().map_or(-1, |b| b as i32)
}

/// All dual edges satisfying the edge or the vertex condition.
pub fn valid_dual_edges(r: &OrthoRep, costs: &[EdgeCost], poles: (VertexId, VertexId)) -> Vec<DualArc> {
    let g = &r.graph;
    let mut out = Vec::new();
    for i in 0..2 * g.m() {
        let x = Dart(i as u32);
        let from = r.faces.face(x);
        let to = r.faces.face(x.rev());
        if r.rot_dart[x.rev().idx()] < cap(&costs[x.edge()]) {
            out.push(DualArc { from, to, dart: x, why: Justification::Edge });
        }
        for v in [g.head(x), g.tail(x)] {
            if v == poles.0 || v == poles.1 {
                continue;
            }
            let a = DualArc { from, to, dart: x, why: Justification::Vertex(v) };
            let (lo, hi) = a.keys(r);
            if lo != hi && r.rot_corner[hi.idx()] < 1 {
                out.push(a);
            }
        }
    }
    out
}

/// Applies the cycle; fails when the result breaks a representation property.
pub fn bend_along(r: &OrthoRep, c: &ValidCycle) -> Result<OrthoRep, Vec<RepViolation>> {
    let mut out = r.clone();
    for a in &c.arcs {
        let (lo, hi) = a.keys(r);
        match a.why {
            Justification::Edge => {
                out.rot_dart[lo.idx()] -= 1;
                out.rot_dart[hi.idx()] += 1;
            }
            Justification::Vertex(_) => {
                out.rot_corner[lo.idx()] -= 1;
                out.rot_corner[hi.idx()] += 1;
            }
        }
    }
    let v = out.validate();
    if v.is_empty() {
        Ok(out)
    } else {
        Err(v)
    }
}

/// Checks that every arc of `c` is a valid dual edge of `r`.
pub fn is_valid_cycle(r: &OrthoRep, costs: &[EdgeCost], poles: (VertexId, VertexId), c: &ValidCycle) -> bool {
    let valid: HashSet<DualArc> = valid_dual_edges(r, costs, poles).into_iter().collect();
    let closed = c.arcs.windows(2).all(|w| w[0].to == w[1].from)
        && c.arcs.first().map(|a| a.from) == c.arcs.last().map(|a| a.to);
    closed && c.arcs.iter().all(|a| valid.contains(a))
}

/// A valid cycle through the outer face that leaves it across π(s,t) and
/// re-enters across π(t,s), so bending along it lowers −rot(π(t,s)) by one.
pub fn find_valid_cycle(r: &OrthoRep, costs: &[EdgeCost], s: VertexId, t: VertexId) -> Option<ValidCycle> {
    let g0 = r.faces.outer;
    let p_st = r.pi(s, t)?;
    let p_ts = r.pi(t, s)?;
    let on = |walk: &[Dart]| -> (HashSet<Dart>, HashSet<Dart>) {
        let darts = walk.iter().copied().collect();
        let corners = walk[..walk.len() - 1].iter().copied().collect();
        (darts, corners)
    };
    let (st_d, st_c) = on(&p_st);
    let (ts_d, ts_c) = on(&p_ts);
    let arcs = valid_dual_edges(r, costs, (s, t));
    let leaves = |a: &DualArc| {
        let (lo, _) = a.keys(r);
        a.from == g0
            && match a.why {
                Justification::Edge => st_d.contains(&lo),
                Justification::Vertex(_) => st_c.contains(&lo),
            }
    };
    let enters = |a: &DualArc| {
        let (_, hi) = a.keys(r);
        a.to == g0
            && match a.why {
                Justification::Edge => ts_d.contains(&hi),
                Justification::Vertex(_) => ts_c.contains(&hi),
            }
    };
    if let Some(a) = arcs.iter().find(|a| a.from == g0 && a.to == g0 && leaves(a) && enters(a)) {
        return Some(ValidCycle { arcs: vec![*a] });
    }
    let nf = r.faces.len();
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for (i, a) in arcs.iter().enumerate() {
        out_arcs[a.from].push(i);
    }
    let mut via: Vec<Option<usize>> = vec![None; nf];
    let mut q = VecDeque::new();
    for (i, a) in arcs.iter().enumerate() {
        if leaves(a) && a.to != g0 && via[a.to].is_none() {
            via[a.to] = Some(i);
            q.push_back(a.to);
        }
    }
    while let Some(f) = q.pop_front() {
        for &i in &out_arcs[f] {
            let a = &arcs[i];
            if a.to == g0 {
                if enters(a) {
                    let mut path = vec![*a];
                    let mut cur = f;
                    loop {
                        let b = arcs[via[cur].unwrap()];
                        path.push(b);
                        if b.from == g0 {
                            break;
                        }
                        cur = b.from;
                    }
                    path.reverse();
                    return Some(ValidCycle { arcs: path });
                }
            } else if via[a.to].is_none() {
                via[a.to] = Some(i);
                q.push_back(a.to);
            }
        }
    }
    None
}

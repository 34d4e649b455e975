//! Rigid composition: the profile of a triconnected skeleton whose edges
//! stand for child st-graphs with known profiles.
//!
//! Every child becomes a thick edge. For each choice of child occupancies and
//! each combination of child segments, a flow network over the skeleton
//! decides which rotations of π(s,t) are achievable. A child's segment is its
//! whole profile when that is convex over a contiguous range, otherwise one
//! constant-cost run; the number of combinations is the product of segment
//! counts. Both reflections of the skeleton embedding are tried.

use super::profile::{Envelope, Profile};
use crate::embedding::RotationSystem;
use crate::flownet::{extremize, feasible, min_cost, Network, PolePins, RepNetwork};
use crate::flownet::build_network;
use crate::graph::{Dart, Graph, VertexId};
use crate::ortho::OrthoRep;

/// Skeleton without its parent edge; `emb` has the merged face as outer face.
#[derive(Clone, Debug)]
pub struct RigidInput {
    pub graph: Graph,
    pub emb: RotationSystem,
    pub s: VertexId,
    pub t: VertexId,
    /// Degree of each child at its two poles. Away from `s` and `t` a child
    /// occupies exactly that many incidences.
    pub deg: Vec<(u8, u8)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidChoice {
    pub mirrored: bool,
    pub widths: Vec<(u8, u8)>,
    pub segs: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
struct Segment {
    lo: i32,
    hi: i32,
    /// Cost at each rotation from `lo` to `hi`.
    costs: Vec<f64>,
}

impl Segment {
    fn flat(&self) -> bool {
        self.costs.iter().all(|&c| c == self.costs[0])
    }
}

fn segments(p: &Profile, sigma: u8, tau: u8) -> Vec<Segment> {
    let ps = p.pieces(sigma, tau);
    if ps.is_empty() {
        return Vec::new();
    }
    let contiguous = ps.windows(2).all(|w| w[0].hi + 1 == w[1].lo);
    if contiguous {
        let lo = ps[0].lo;
        let hi = ps.last().unwrap().hi;
        let costs: Vec<f64> = ps.iter().flat_map(|q| std::iter::repeat_n(q.cost, (q.hi - q.lo + 1) as usize)).collect();
        let convex = costs.windows(3).all(|w| w[2] - w[1] >= w[1] - w[0] - 1e-9);
        if convex {
            return vec![Segment { lo, hi, costs }];
        }
    }
    p.runs(sigma, tau)
        .into_iter()
        .map(|(lo, hi, c)| Segment { lo, hi, costs: vec![c; (hi - lo + 1) as usize] })
        .collect()
}

/// Occupancy choices per child with at most four occupied incidences per vertex.
fn width_combos(input: &RigidInput, children: &[&Profile]) -> Vec<Vec<(u8, u8)>> {
    let g = &input.graph;
    let pole = |v: VertexId| v == input.s || v == input.t;
    let opts: Vec<Vec<(u8, u8)>> = children
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (u, v) = g.endpoints(i);
            let (du, dv) = input.deg[i];
            p.pairs().filter(|&(a, b)| (pole(u) || a == du) && (pole(v) || b == dv)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(g.m());
    let mut occ = vec![0u8; g.n()];
    fn go(
        i: usize,
        g: &Graph,
        opts: &[Vec<(u8, u8)>],
        cur: &mut Vec<(u8, u8)>,
        occ: &mut Vec<u8>,
        out: &mut Vec<Vec<(u8, u8)>>,
    ) {
        if i == opts.len() {
            out.push(cur.clone());
            return;
        }
        let (u, v) = g.endpoints(i);
        for &(a, b) in &opts[i] {
            if occ[u] + a > 4 || occ[v] + b > 4 {
                continue;
            }
            occ[u] += a;
            occ[v] += b;
            cur.push((a, b));
            go(i + 1, g, opts, cur, occ, out);
            cur.pop();
            occ[u] -= a;
            occ[v] -= b;
        }
    }
    go(0, g, &opts, &mut cur, &mut occ, &mut out);
    out
}

/// Network with child bounds and costs for one segment combination.
fn configure(base: &RepNetwork, segs: &[&Segment]) -> RepNetwork {
    let mut rn = base.clone();
    for (e, sg) in segs.iter().enumerate() {
        let d = Dart::new(e, false);
        rn.bound_dart(d, sg.lo as i64, sg.hi as i64);
        let a = rn.dart_arc[d.idx()];
        if !sg.flat() {
            rn.net.arcs[a].marginal = sg.costs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        rn.net.base_cost += sg.costs[0];
    }
    rn
}

fn base_network(input: &RigidInput, mirrored: bool, widths: &[(u8, u8)]) -> Option<RepNetwork> {
    let emb = if mirrored { input.emb.mirror(&input.graph) } else { input.emb.clone() };
    let wide = vec![(-1_000_000i64, 1_000_000i64); input.graph.m()];
    build_network(&input.graph, &emb, widths, &wide, None).ok()
}

pub fn rigid(input: &RigidInput, children: &[&Profile], cap: i32) -> (Profile, Vec<RigidChoice>) {
    let g = &input.graph;
    debug_assert_eq!(children.len(), g.m());
    let mut env = Envelope::new();
    let combos = width_combos(input, children);
    for mirrored in [false, true] {
        for widths in &combos {
            let Some(base) = base_network(input, mirrored, widths) else { continue };
            let segs: Vec<Vec<Segment>> =
                children.iter().zip(widths).map(|(p, &(a, b))| segments(p, a, b)).collect();
            let occ_s: u8 = g.out_darts(input.s).iter().map(|&d| occ_tail(widths, d)).sum();
            let occ_t: u8 = g.out_darts(input.t).iter().map(|&d| occ_tail(widths, d)).sum();
            let mut pick = vec![0usize; segs.len()];
            loop {
                let chosen: Vec<&Segment> = pick.iter().zip(&segs).map(|(&i, s)| &s[i]).collect();
                let rn = configure(&base, &chosen);
                if feasible(&rn.net).is_some() {
                    let flat = chosen.iter().all(|s| s.flat());
                    let choice = RigidChoice { mirrored, widths: widths.clone(), segs: pick.iter().map(|&i| i as u32).collect() };
                    for sigma in occ_s.max(1)..=4 {
                        for tau in occ_t.max(1)..=4 {
                            emit(&rn, input, sigma, tau, flat, &choice, &mut env);
                        }
                    }
                }
                // Next combination, odometer style.
                let mut i = 0;
                while i < pick.len() {
                    pick[i] += 1;
                    if pick[i] < segs[i].len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
                if i == pick.len() {
                    break;
                }
            }
        }
    }
    env.finish(cap)
}

fn occ_tail(widths: &[(u8, u8)], d: Dart) -> u8 {
    let w = widths[d.edge()];
    if d.is_forward() {
        w.0
    } else {
        w.1
    }
}

fn pinned(rn: &RepNetwork, input: &RigidInput, sigma: u8, tau: u8) -> Option<(Network, usize)> {
    let mut rn = rn.clone();
    rn.pin_poles(PolePins { s: input.s, t: input.t, sigma, tau });
    rn.split_outer(input.s, input.t)
}

fn emit(
    rn: &RepNetwork,
    input: &RigidInput,
    sigma: u8,
    tau: u8,
    flat: bool,
    choice: &RigidChoice,
    env: &mut Envelope<RigidChoice>,
) {
    let Some((net, bridge)) = pinned(rn, input, sigma, tau) else { return };
    let Some((a, b)) = extremize(&net, bridge) else { return };
    if flat {
        env.push(sigma, tau, a as i32, b as i32, net.base_cost, choice.clone());
        return;
    }
    for r in a..=b {
        let mut n = net.clone();
        n.arcs[bridge].lo = r;
        n.arcs[bridge].hi = r;
        if let Some((_, c)) = min_cost(&n) {
            env.push(sigma, tau, r as i32, r as i32, c, choice.clone());
        }
    }
}

/// Skeleton representation (children as thick edges) realizing `choice` at
/// (σ, τ) with rot(π(s,t)) = r. Child rotations are the forward dart rotations.
pub fn rigid_realize(
    input: &RigidInput,
    children: &[&Profile],
    choice: &RigidChoice,
    sigma: u8,
    tau: u8,
    r: i32,
) -> Option<OrthoRep> {
    let base = base_network(input, choice.mirrored, &choice.widths)?;
    let segs: Vec<Segment> = children
        .iter()
        .zip(&choice.widths)
        .zip(&choice.segs)
        .map(|((p, &(a, b)), &k)| segments(p, a, b).swap_remove(k as usize))
        .collect();
    let chosen: Vec<&Segment> = segs.iter().collect();
    let rn = configure(&base, &chosen);
    let (mut net, bridge) = pinned(&rn, input, sigma, tau)?;
    net.arcs[bridge].lo = r as i64;
    net.arcs[bridge].hi = r as i64;
    let flow = if chosen.iter().all(|s| s.flat()) { feasible(&net)? } else { min_cost(&net)?.0 };
    Some(rn.flow_to_rep(&flow))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::edge_profile;
    use crate::model::EdgeCost;

    /// K4 minus the edge (0,1), embedded with the merged face outside.
    fn k4_minus_edge() -> RigidInput {
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let emb = crate::planar::planar_embedding(&g).unwrap();
        let faces = emb.faces(&g);
        // The face containing both poles.
        let f = (0..faces.len())
            .find(|&f| {
                let vs: Vec<usize> = faces.cycles[f].iter().map(|&d| g.tail(d)).collect();
                vs.contains(&0) && vs.contains(&1)
            })
            .unwrap();
        let emb = emb.with_outer(faces.cycles[f][0]);
        RigidInput { graph: g, emb, s: 0, t: 1, deg: vec![(1, 1); 5] }
    }

    #[test]
    fn k4_children_flex_one() {
        let input = k4_minus_edge();
        let e = edge_profile(&EdgeCost::Flex(1), 12);
        let kids = vec![&e; 5];
        let (p, choices) = rigid(&input, &kids, 12);
        assert!(!p.is_empty());
        for (s, t) in p.pairs() {
            for pc in p.pieces(s, t) {
                let r = rigid_realize(&input, &kids, &choices[pc.origin as usize], s, t, pc.lo).unwrap();
                assert!(r.is_valid(), "{:?}", r.validate());
                assert_eq!(r.bends_st(0, 1).map(|x| (x.1, x.2)), Some((s, t)));
            }
        }
    }

    #[test]
    fn segments_split_gaps_and_keep_convex_ranges() {
        let e = edge_profile(&EdgeCost::Table(vec![0.0, 1.0, 3.0]), 12);
        assert_eq!(segments(&e, 1, 1).len(), 1);
        let e = edge_profile(&EdgeCost::Table(vec![0.0, 3.0, 4.0]), 12);
        assert_eq!(segments(&e, 1, 1).len(), 5);
    }
}

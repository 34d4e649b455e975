//! Exhaustive ground truth for small instances.
//!
//! Every rotation system is generated and kept if planar; every face is tried
//! as the outer face; corner tuples per vertex and rotations per edge are then
//! enumerated by depth-first search. Pruning only discards partial
//! assignments whose face sums can no longer be met (or, when minimizing,
//! whose cost bound is already too high), so nothing valid is skipped.

use crate::embedding::RotationSystem;
use crate::graph::{Dart, Graph, VertexId};
use crate::model::{EdgeCost, Instance};
use crate::ortho::OrthoRep;
use std::collections::BTreeSet;
use std::ops::ControlFlow;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_vertices: usize,
    /// Largest bend count per edge the search accepts.
    pub max_bend: u32,
    pub max_reps: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_vertices: 8, max_bend: 8, max_reps: 10_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} vertices exceed the budget of {1}")]
    TooManyVertices(usize, usize),
    #[error("edge {0} allows more bends than the budget")]
    TooManyBends(usize),
    #[error("more than {0} representations")]
    TooManyReps(u64),
    #[error("graph is not connected")]
    Disconnected,
}

/// Optional restriction of the enumeration to poles on the outer face.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PoleFilter {
    pub poles: Option<(VertexId, VertexId)>,
    /// Required (σ, τ), read off the outer corners at the poles.
    pub occupancy: Option<(u8, u8)>,
}

fn cyclic_orders(darts: &[Dart]) -> Vec<Vec<Dart>> {
    if darts.len() <= 2 {
        return vec![darts.to_vec()];
    }
    let mut out = Vec::new();
    let mut rest: Vec<Dart> = darts[1..].to_vec();
    permute(&mut rest, 0, &mut |p| {
        let mut v = vec![darts[0]];
        v.extend_from_slice(p);
        out.push(v);
    });
    out
}

fn permute(a: &mut Vec<Dart>, k: usize, f: &mut dyn FnMut(&[Dart])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permute(a, k + 1, f);
        a.swap(k, i);
    }
}

/// All planar rotation systems of a connected graph.
pub fn planar_rotation_systems(g: &Graph) -> Vec<RotationSystem> {
    let choices: Vec<Vec<Vec<Dart>>> = (0..g.n()).map(|v| cyclic_orders(g.out_darts(v))).collect();
    let euler = 2 + g.m() as i64 - g.n() as i64;
    let mut out = Vec::new();
    let mut idx = vec![0usize; g.n()];
    loop {
        let rot: Vec<Vec<Dart>> = (0..g.n()).map(|v| choices[v][idx[v]].clone()).collect();
        if let Ok(emb) = RotationSystem::new(g, rot, None) {
            if emb.faces(g).len() as i64 == euler {
                out.push(emb);
            }
        }
        let mut v = 0;
        while v < g.n() {
            idx[v] += 1;
            if idx[v] < choices[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
        if v == g.n() {
            break;
        }
    }
    out
}

/// One search variable: a corner tuple of a vertex or the rotation of an edge.
struct Var {
    /// Per value: contributions (face, amount), and its cost.
    values: Vec<(Vec<(usize, i32)>, f64)>,
    /// Per touched face: (min, max) total contribution.
    range: Vec<(usize, i32, i32)>,
    min_cost: f64,
}

struct Search<'a> {
    vars: Vec<Var>,
    target: Vec<i32>,
    sum: Vec<i32>,
    rem_lo: Vec<i32>,
    rem_hi: Vec<i32>,
    pick: Vec<usize>,
    rest_cost: Vec<f64>,
    /// When minimizing: only strictly cheaper completions are explored.
    bound: Option<f64>,
    visit: &'a mut dyn FnMut(&[usize], f64) -> ControlFlow<()>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, cost: f64) -> ControlFlow<()> {
        if let Some(b) = self.bound {
            if cost + self.rest_cost[i] >= b - 1e-9 {
                return ControlFlow::Continue(());
            }
        }
        if i == self.vars.len() {
            if self.bound.is_some() {
                self.bound = Some(cost);
            }
            return (self.visit)(&self.pick, cost);
        }
        for &(f, lo, hi) in &self.vars[i].range {
            self.rem_lo[f] -= lo;
            self.rem_hi[f] -= hi;
        }
        let nv = self.vars[i].values.len();
        let mut out = ControlFlow::Continue(());
        for k in 0..nv {
            let c = self.vars[i].values[k].1;
            if !c.is_finite() {
                continue;
            }
            for &(f, a) in &self.vars[i].values[k].0 {
                self.sum[f] += a;
            }
            let ok = self.vars[i].range.iter().all(|&(f, _, _)| {
                let need = self.target[f] - self.sum[f];
                self.rem_lo[f] <= need && need <= self.rem_hi[f]
            });
            if ok {
                self.pick[i] = k;
                out = self.run(i + 1, cost + c);
            }
            for &(f, a) in &self.vars[i].values[k].0 {
                self.sum[f] -= a;
            }
            if out.is_break() {
                break;
            }
        }
        for &(f, lo, hi) in &self.vars[i].range {
            self.rem_lo[f] += lo;
            self.rem_hi[f] += hi;
        }
        out
    }
}

fn corner_tuples(d: usize) -> Vec<Vec<i32>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let total = 2 * d as i32 - 4;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(d: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == d {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in -2..=1 {
            cur.push(c);
            go(d, left - c, cur, out);
            cur.pop();
        }
    }
    go(d, total, &mut cur, &mut out);
    out
}

fn bend_bound(c: &EdgeCost, budget: &EnumerationBudget, e: usize) -> Result<u32, OracleError> {
    let b = c.max_bends().unwrap_or(0);
    if b > budget.max_bend {
        return Err(OracleError::TooManyBends(e));
    }
    Ok(b)
}

/// Visits every valid representation of one embedding with outer face `outer`.
/// With a `bound`, only representations cheaper than the last visited one are.
fn search_embedding(
    g: &Graph,
    costs: &[EdgeCost],
    bounds: &[u32],
    emb: &RotationSystem,
    outer: usize,
    bound: Option<f64>,
    visit: &mut dyn FnMut(OrthoRep, f64) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if g.m() == 0 {
        return visit(OrthoRep::plain(g.clone(), emb.clone(), Vec::new(), Vec::new()), 0.0);
    }
    let faces = emb.faces(g);
    let nf = faces.len();
    let mut vars = Vec::new();
    // Vertex corner tuples: value j assigns tuple[j][i] to the corner after rotation[i].
    let mut tuples = Vec::new();
    for v in 0..g.n() {
        let rot = emb.rotation(v);
        let ts = corner_tuples(rot.len());
        let values = ts
            .iter()
            .map(|t| (rot.iter().zip(t).map(|(&d, &c)| (faces.face(d.rev()), c)).collect(), 0.0))
            .collect();
        vars.push(values);
        tuples.push(ts);
    }
    for e in 0..g.m() {
        let b = bounds[e] as i32;
        let f = Dart::new(e, false);
        let values = (-b..=b)
            .map(|r| (vec![(faces.face(f), r), (faces.face(f.rev()), -r)], costs[e].cost(r.unsigned_abs())))
            .collect();
        vars.push(values);
    }
    let vars: Vec<Var> = vars
        .into_iter()
        .map(|values: Vec<(Vec<(usize, i32)>, f64)>| {
            let mut touched: Vec<usize> = values.iter().flat_map(|(c, _)| c.iter().map(|x| x.0)).collect();
            touched.sort_unstable();
            touched.dedup();
            let range = touched
                .iter()
                .map(|&f| {
                    let tot = |c: &Vec<(usize, i32)>| c.iter().filter(|x| x.0 == f).map(|x| x.1).sum::<i32>();
                    let lo = values.iter().filter(|v| v.1.is_finite()).map(|v| tot(&v.0)).min().unwrap_or(0);
                    let hi = values.iter().filter(|v| v.1.is_finite()).map(|v| tot(&v.0)).max().unwrap_or(0);
                    (f, lo, hi)
                })
                .collect();
            let min_cost = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
            Var { values, range, min_cost }
        })
        .collect();
    if vars.iter().any(|v| !v.min_cost.is_finite()) {
        return ControlFlow::Continue(());
    }
    let mut rem_lo = vec![0; nf];
    let mut rem_hi = vec![0; nf];
    for v in &vars {
        for &(f, lo, hi) in &v.range {
            rem_lo[f] += lo;
            rem_hi[f] += hi;
        }
    }
    let mut rest_cost = vec![0.0; vars.len() + 1];
    for i in (0..vars.len()).rev() {
        rest_cost[i] = rest_cost[i + 1] + vars[i].min_cost;
    }
    let target: Vec<i32> = (0..nf).map(|f| if f == outer { -4 } else { 4 }).collect();
    let n = g.n();
    let emb_out = emb.with_outer(faces.cycles[outer][0]);
    let mut build = |pick: &[usize], cost: f64| {
        let mut rd = vec![0; 2 * g.m()];
        let mut rc = vec![0; 2 * g.m()];
        for v in 0..n {
            for (i, &d) in emb_out.rotation(v).iter().enumerate() {
                rc[d.rev().idx()] = tuples[v][pick[v]][i];
            }
        }
        for e in 0..g.m() {
            let r = pick[n + e] as i32 - bounds[e] as i32;
            rd[2 * e] = r;
            rd[2 * e + 1] = -r;
        }
        visit(OrthoRep::plain(g.clone(), emb_out.clone(), rd, rc), cost)
    };
    let pick = vec![0; vars.len()];
    let mut s = Search { vars, target, sum: vec![0; nf], rem_lo, rem_hi, pick, rest_cost, bound, visit: &mut build };
    s.run(0, 0.0)
}

fn prepare(inst: &Instance, budget: &EnumerationBudget) -> Result<Vec<u32>, OracleError> {
    if inst.n() > budget.max_vertices {
        return Err(OracleError::TooManyVertices(inst.n(), budget.max_vertices));
    }
    if inst.n() > 0 && !inst.graph.is_connected() {
        return Err(OracleError::Disconnected);
    }
    inst.costs.iter().enumerate().map(|(e, c)| bend_bound(c, budget, e)).collect()
}

fn passes(r: &OrthoRep, filter: &PoleFilter, restrict: &BTreeSet<VertexId>) -> bool {
    for &v in restrict {
        if r.emb.rotation(v).iter().any(|d| r.rot_corner[d.rev().idx()] == 0) {
            return false;
        }
    }
    let Some((s, t)) = filter.poles else { return true };
    match r.bends_st(s, t) {
        None => false,
        Some((_, a, b)) => filter.occupancy.is_none_or(|o| o == (a, b)),
    }
}

/// Calls `visit` with every valid representation (and its cost) in a fixed order.
pub fn for_each_rep(
    inst: &Instance,
    budget: &EnumerationBudget,
    filter: &PoleFilter,
    visit: &mut dyn FnMut(&OrthoRep, f64) -> ControlFlow<()>,
) -> Result<(), OracleError> {
    let bounds = prepare(inst, budget)?;
    let g = &inst.graph;
    let mut count = 0u64;
    let mut over = false;
    for emb in planar_rotation_systems(g) {
        let nf = emb.faces(g).len();
        for outer in 0..nf.max(1) {
            let flow = search_embedding(g, &inst.costs, &bounds, &emb, outer, None, &mut |r, c| {
                if !passes(&r, filter, &inst.restrict_90) {
                    return ControlFlow::Continue(());
                }
                count += 1;
                if count > budget.max_reps {
                    over = true;
                    return ControlFlow::Break(());
                }
                visit(&r, c)
            });
            if over {
                return Err(OracleError::TooManyReps(budget.max_reps));
            }
            if flow.is_break() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Like [`for_each_rep`] for one given embedding and outer face, without the
/// vertex limit.
pub fn for_each_rep_of_embedding(
    inst: &Instance,
    budget: &EnumerationBudget,
    emb: &RotationSystem,
    filter: &PoleFilter,
    visit: &mut dyn FnMut(&OrthoRep, f64) -> ControlFlow<()>,
) -> Result<(), OracleError> {
    let unlimited = EnumerationBudget { max_vertices: usize::MAX, ..*budget };
    let bounds = prepare(inst, &unlimited)?;
    let g = &inst.graph;
    let faces = emb.faces(g);
    let outer = emb.outer_dart().map_or(0, |d| faces.face(d));
    let mut count = 0u64;
    let mut over = false;
    let _ = search_embedding(g, &inst.costs, &bounds, emb, outer, None, &mut |r, c| {
        if !passes(&r, filter, &inst.restrict_90) {
            return ControlFlow::Continue(());
        }
        count += 1;
        if count > budget.max_reps {
            over = true;
            return ControlFlow::Break(());
        }
        visit(&r, c)
    });
    if over {
        return Err(OracleError::TooManyReps(budget.max_reps));
    }
    Ok(())
}

pub fn enumerate_reps(inst: &Instance, budget: &EnumerationBudget, filter: &PoleFilter) -> Result<Vec<OrthoRep>, OracleError> {
    let mut out = Vec::new();
    for_each_rep(inst, budget, filter, &mut |r, _| {
        out.push(r.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn oracle_feasible(inst: &Instance, budget: &EnumerationBudget) -> Result<bool, OracleError> {
    let mut found = false;
    for_each_rep(inst, budget, &PoleFilter::default(), &mut |_, _| {
        found = true;
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Minimum cost over all representations; `None` if there is none.
pub fn oracle_optimal(inst: &Instance, budget: &EnumerationBudget) -> Result<Option<f64>, OracleError> {
    let bounds = prepare(inst, budget)?;
    let g = &inst.graph;
    let mut best: Option<f64> = None;
    let f = PoleFilter::default();
    for emb in planar_rotation_systems(g) {
        for outer in 0..emb.faces(g).len() {
            let start = best.unwrap_or(f64::INFINITY);
            let _ = search_embedding(g, &inst.costs, &bounds, &emb, outer, Some(start), &mut |r, c| {
                if passes(&r, &f, &inst.restrict_90) && best.is_none_or(|b| c < b) {
                    best = Some(c);
                }
                ControlFlow::Continue(())
            });
        }
    }
    Ok(best)
}

/// Canonical key of a representation up to reflection.
pub fn class_key(r: &OrthoRep) -> Vec<i64> {
    let enc = |x: &OrthoRep| -> Vec<i64> {
        let mut k = Vec::new();
        for v in 0..x.graph.n() {
            let rot = x.emb.rotation(v);
            // Start each rotation at its smallest dart so the key ignores the cyclic shift.
            let start = (0..rot.len()).min_by_key(|&i| rot[i].0).unwrap_or(0);
            k.push(rot.len() as i64);
            for i in 0..rot.len() {
                let d = rot[(start + i) % rot.len()];
                k.push(d.0 as i64);
                k.push(x.rot_corner[d.rev().idx()] as i64);
            }
        }
        k.extend(x.rot_dart.iter().map(|&r| r as i64));
        k
    };
    let a = enc(r);
    let b = enc(&r.mirror());
    a.min(b)
}

/// Number of representations up to reflection.
pub fn classes(inst: &Instance, budget: &EnumerationBudget) -> Result<usize, OracleError> {
    let mut keys = BTreeSet::new();
    for_each_rep(inst, budget, &PoleFilter::default(), &mut |r, _| {
        keys.insert(class_key(r));
        ControlFlow::Continue(())
    })?;
    Ok(keys.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    #[test]
    fn single_edge_three_reps() {
        let inst = Instance::from_edges(2, &[(0, 1)], 1);
        assert_eq!(enumerate_reps(&inst, &budget(), &PoleFilter::default()).unwrap().len(), 3);
    }

    #[test]
    fn digon_flex0_empty_square_one_class() {
        let inst = Instance::from_edges(2, &[(0, 1), (0, 1)], 0);
        assert!(enumerate_reps(&inst, &budget(), &PoleFilter::default()).unwrap().is_empty());
        let sq = Instance::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 0);
        let reps = enumerate_reps(&sq, &budget(), &PoleFilter::default()).unwrap();
        assert!(reps.iter().all(|r| r.is_valid()));
        assert_eq!(classes(&sq, &budget()).unwrap(), 1);
    }

    #[test]
    fn triangle_cost_and_octahedron() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let inst = Instance::new(g, vec![EdgeCost::Table(vec![0.0, 1.0, 2.0, 3.0]); 3]);
        assert_eq!(oracle_optimal(&inst, &budget()).unwrap(), Some(1.0));
        let oct = [(0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2), (5, 3), (5, 4), (1, 2), (2, 3), (3, 4), (4, 1)];
        assert!(!oracle_feasible(&Instance::from_edges(6, &oct, 2), &budget()).unwrap());
        let tree = Instance::from_edges(4, &[(0, 1), (0, 2), (0, 3)], 0);
        assert!(oracle_feasible(&tree, &budget()).unwrap());
    }

    #[test]
    fn rotation_systems_of_k4() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(planar_rotation_systems(&g).len(), 2);
    }
}

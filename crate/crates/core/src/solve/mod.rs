//! Deciders and optimizers over all embeddings.
//!
//! Every block is solved over all reference edges with its SPQR-tree
//! profiles; the block-cut tree is then rooted at each block in turn and the
//! cheapest combination is assembled into one representation.

pub mod blocks;
pub mod engine;

pub use engine::{Engine, ExprId, Root};

use crate::compose::Profile;
use crate::decomposition::bc::BcError;
use crate::decomposition::{build_bc, SpqrError};
use crate::embedding::RotationSystem;
use crate::flownet::{min_cost, network_for_costs, NetworkError};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::model::{validate_instance, EdgeCost, Instance, Violation};
use crate::ortho::OrthoRep;
use blocks::{restrictions, rooted, Assembly, Block, Pick, Roles};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SolveError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("invalid instance: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("graph is not biconnected with the edge st")]
    NotBiconnected,
    #[error("no edge joins the poles")]
    NoPoleEdge,
    #[error("graph is not series-parallel")]
    NotSeriesParallel,
    #[error("cost table of edge {0} is not convex")]
    NonConvex(EdgeId),
    #[error("the fixed embedding is invalid: {0}")]
    Embedding(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<SpqrError> for SolveError {
    fn from(_: SpqrError) -> Self {
        SolveError::NotBiconnected
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    FlexDraw,
    Optimal,
    SpOptimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
    Optimal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockTrace {
    pub edges: Vec<EdgeId>,
    /// Cutvertex the block hangs below (none for the root block).
    pub attach: Option<VertexId>,
    pub reference: EdgeId,
    pub poles: (VertexId, VertexId),
    pub sigma: u8,
    pub tau: u8,
    pub rotation: i32,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub status: Status,
    pub cost: Option<f64>,
    pub witness: Option<OrthoRep>,
    pub bends: Vec<u32>,
    pub mode: &'static str,
    pub root_block: Option<usize>,
    pub blocks: Vec<BlockTrace>,
}

impl Solution {
    fn infeasible(mode: &'static str) -> Solution {
        Solution { status: Status::Infeasible, cost: None, witness: None, bends: Vec::new(), mode, root_block: None, blocks: Vec::new() }
    }

    pub fn is_feasible(&self) -> bool {
        self.status != Status::Infeasible
    }

    pub fn to_json(&self, inst: &Instance) -> Value {
        let vn = |v: VertexId| inst.vertex_names.get(v).cloned().unwrap_or_else(|| v.to_string());
        let en = |e: EdgeId| inst.edge_names.get(e).cloned().unwrap_or_else(|| e.to_string());
        let status = match self.status {
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Optimal => "optimal",
        };
        let bends: Vec<Value> = self.bends.iter().enumerate().map(|(e, b)| json!({ "edge": en(e), "bends": b })).collect();
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "edges": b.edges.iter().map(|&e| en(e)).collect::<Vec<_>>(),
                    "attach": b.attach.map(vn),
                    "reference": en(b.reference),
                    "poles": [vn(b.poles.0), vn(b.poles.1)],
                    "sigma": b.sigma,
                    "tau": b.tau,
                    "rotation": b.rotation,
                    "cost": b.cost,
                })
            })
            .collect();
        let witness = self.witness.as_ref().map(|w| rep_json(w, inst));
        let poles = match (inst.poles, &self.witness) {
            (Some((s, t)), Some(w)) => w.bends_st(s, t).map(|(b, sigma, tau)| json!({ "s": vn(s), "t": vn(t), "bends": b, "sigma": sigma, "tau": tau })),
            _ => None,
        };
        json!({
            "status": status,
            "mode": self.mode,
            "cost": self.cost,
            "bends": bends,
            "witness": witness,
            "poles": poles,
            "trace": { "root_block": self.root_block, "blocks": blocks },
        })
    }
}

/// Rotation system and rotations with instance names.
pub fn rep_json(r: &OrthoRep, inst: &Instance) -> Value {
    let g = &r.graph;
    let en = |e: EdgeId| inst.edge_names.get(e).cloned().unwrap_or_else(|| e.to_string());
    let side = |d: crate::graph::Dart| json!({ "edge": en(d.edge()), "from": inst.vertex_names.get(g.tail(d)) });
    let rotation: Vec<Value> = (0..g.n())
        .map(|v| {
            json!({
                "vertex": inst.vertex_names.get(v),
                "darts": r.emb.rotation(v).iter().map(|&d| side(d)).collect::<Vec<_>>(),
                "corners": r.emb.rotation(v).iter().map(|&d| r.rot_corner[d.rev().idx()]).collect::<Vec<_>>(),
            })
        })
        .collect();
    let edges: Vec<Value> = (0..g.m())
        .map(|e| json!({ "edge": en(e), "rot_forward": r.rot_dart[2 * e], "rot_backward": r.rot_dart[2 * e + 1] }))
        .collect();
    json!({ "rotation": rotation, "edges": edges, "outer": r.emb.outer_dart().map(side) })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Bound on |rot(π(s,t))| beyond the minimum; defaults to a value no
    /// representation exceeds.
    pub bend_cap: Option<i32>,
}

/// A cap that never cuts off a representation: rotations along a path are
/// bounded by its bends plus two per corner.
pub fn default_cap(inst: &Instance) -> i32 {
    let bends: u64 = inst.costs.iter().map(|c| c.max_bends().unwrap_or(0) as u64).sum();
    (bends + 2 * inst.n() as u64 + 4).min(1 << 20) as i32
}

/// Runs `f` on a thread with a large stack; deep SPQR-trees recurse deeply.
fn with_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|sc| {
        std::thread::Builder::new().stack_size(1 << 29).spawn_scoped(sc, f).expect("spawn solver thread").join().expect("solver thread panicked")
    })
}

fn check(inst: &Instance, monotone: bool) -> Result<(), SolveError> {
    let v: Vec<Violation> = validate_instance(inst)
        .into_iter()
        .filter(|x| monotone || !matches!(x, Violation::NonMonotone(_)))
        .collect();
    if !v.is_empty() {
        return Err(SolveError::Invalid(v));
    }
    if inst.n() == 0 {
        return Err(SolveError::Empty);
    }
    if !inst.graph.is_connected() {
        return Err(SolveError::Disconnected);
    }
    Ok(())
}

/// Costs with every finite value replaced by 0.
fn feasibility_costs(costs: &[EdgeCost]) -> Vec<EdgeCost> {
    costs
        .iter()
        .map(|c| match c {
            EdgeCost::Flex(f) => EdgeCost::Flex(*f),
            EdgeCost::Table(t) => EdgeCost::Table(t.iter().map(|x| if x.is_finite() { 0.0 } else { f64::INFINITY }).collect()),
        })
        .collect()
}

pub fn solve(inst: &Instance, mode: Mode, opts: &SolveOptions) -> Result<Solution, SolveError> {
    check(inst, mode != Mode::FlexDraw)?;
    let name = match mode {
        Mode::FlexDraw => "flexdraw",
        Mode::Optimal => "optimal",
        Mode::SpOptimal => "sp-optimal",
    };
    let g = &inst.graph;
    if g.m() == 0 {
        let emb = RotationSystem::new(g, vec![Vec::new(); g.n()], None).map_err(|e| SolveError::Internal(e.to_string()))?;
        let w = OrthoRep::plain(g.clone(), emb, Vec::new(), Vec::new());
        let status = if mode == Mode::FlexDraw { Status::Feasible } else { Status::Optimal };
        return Ok(Solution { status, cost: Some(0.0), witness: Some(w), bends: Vec::new(), mode: name, root_block: None, blocks: Vec::new() });
    }
    let costs = if mode == Mode::FlexDraw { feasibility_costs(&inst.costs) } else { inst.costs.clone() };
    let cap = opts.bend_cap.unwrap_or_else(|| default_cap(inst));
    with_stack(|| solve_blocks(inst, &costs, mode, name, cap))
}

fn solve_blocks(inst: &Instance, costs: &[EdgeCost], mode: Mode, name: &'static str, cap: i32) -> Result<Solution, SolveError> {
    let g = &inst.graph;
    let bc = build_bc(g).map_err(|BcError::Disconnected| SolveError::Disconnected)?;
    let flags = restrictions(g, &bc);
    let mut blocks = Vec::with_capacity(bc.blocks.len());
    for (b, es) in bc.blocks.iter().enumerate() {
        let mut fl = flags[b].clone();
        for &v in &inst.restrict_90 {
            fl[v] = true;
        }
        let blk = Block::new(g, costs, es, &fl, cap)?;
        if mode == Mode::SpOptimal && blk.has_rigid() {
            return Err(SolveError::NotSeriesParallel);
        }
        blocks.push(blk);
    }
    let first = mode == Mode::FlexDraw;
    let mut roles = Roles::new(g, &bc, blocks, first);
    let mut best: Option<(f64, usize, Vec<Pick>)> = None;
    'roots: for root in 0..bc.blocks.len() {
        let (parent, _) = rooted(&bc, root);
        let mut picks = Vec::with_capacity(parent.len());
        let mut total = 0.0;
        for (b, &p) in parent.iter().enumerate() {
            match roles.pick(b, p) {
                Some(pk) => {
                    total += pk.cost;
                    picks.push(pk);
                }
                None => continue 'roots,
            }
        }
        if best.as_ref().is_none_or(|(c, _, _)| total < *c) {
            best = Some((total, root, picks));
            if first {
                break;
            }
        }
    }
    let Some((total, root, picks)) = best else { return Ok(Solution::infeasible(name)) };
    let (parent, order) = rooted(&bc, root);
    let mut asm = Assembly::new(g);
    let mut trace = Vec::new();
    for &b in &order {
        let blk = &roles.blocks[b];
        let pk = &picks[b];
        let rep = blk.witness(pk).ok_or_else(|| SolveError::Internal(format!("block {b} has no witness")))?;
        asm.add(blk, &rep, parent[b]).map_err(SolveError::Internal)?;
        trace.push(BlockTrace {
            edges: blk.edges.clone(),
            attach: parent[b],
            reference: blk.edges[pk.edge],
            poles: (blk.verts[pk.s], blk.verts[pk.t]),
            sigma: pk.sigma,
            tau: pk.tau,
            rotation: pk.r,
            cost: pk.cost,
        });
    }
    let w = asm.finish(g).map_err(SolveError::Internal)?;
    finish(inst, w, total, mode, name, Some(root), trace)
}

fn finish(
    inst: &Instance,
    w: OrthoRep,
    total: f64,
    mode: Mode,
    name: &'static str,
    root_block: Option<usize>,
    blocks: Vec<BlockTrace>,
) -> Result<Solution, SolveError> {
    let v = w.validate();
    if !v.is_empty() {
        return Err(SolveError::Internal(format!("witness fails validation: {v:?}")));
    }
    let cost = w.cost(&inst.costs);
    if mode != Mode::FlexDraw && (cost - total).abs() > 1e-6 {
        return Err(SolveError::Internal(format!("witness cost {cost} differs from optimum {total}")));
    }
    if !cost.is_finite() {
        return Err(SolveError::Internal("witness exceeds a bend limit".into()));
    }
    let bends = (0..inst.m()).map(|e| w.bends(e)).collect();
    let status = if mode == Mode::FlexDraw { Status::Feasible } else { Status::Optimal };
    let cost = if mode == Mode::FlexDraw { Some(0.0) } else { Some(cost) };
    Ok(Solution { status, cost, witness: Some(w), bends, mode: name, root_block, blocks })
}

/// FlexDraw: is there a representation within all bend limits?
pub fn solve_flexdraw_fpt(inst: &Instance) -> Result<Solution, SolveError> {
    solve(inst, Mode::FlexDraw, &SolveOptions::default())
}

/// OptimalFlexDraw over all embeddings.
pub fn solve_optimal(inst: &Instance) -> Result<Solution, SolveError> {
    solve(inst, Mode::Optimal, &SolveOptions::default())
}

/// OptimalFlexDraw for series-parallel graphs (no rigid compositions).
pub fn solve_sp_optimal(inst: &Instance) -> Result<Solution, SolveError> {
    solve(inst, Mode::SpOptimal, &SolveOptions::default())
}

/// Cost profile of a biconnected graph with the edge `st` on the outer face.
pub struct StProfile {
    pub engine: Engine,
    pub root: Root,
}

impl StProfile {
    pub fn profile(&self) -> &Profile {
        self.engine.profile(self.root.expr)
    }

    pub fn witness(&self, sigma: u8, tau: u8, r: i32) -> Option<OrthoRep> {
        self.engine.witness(self.root, sigma, tau, r)
    }
}

pub fn solve_st(inst: &Instance, s: VertexId, t: VertexId, opts: &SolveOptions) -> Result<StProfile, SolveError> {
    let g = &inst.graph;
    let e = (0..g.m()).find(|&e| g.endpoints(e) == (s, t)).or_else(|| (0..g.m()).find(|&e| g.endpoints(e) == (t, s)));
    let e = e.ok_or(SolveError::NoPoleEdge)?;
    if !crate::connectivity::is_biconnected(g) {
        return Err(SolveError::NotBiconnected);
    }
    let cap = opts.bend_cap.unwrap_or_else(|| default_cap(inst));
    let restricted: Vec<bool> = (0..g.n()).map(|v| inst.restrict_90.contains(&v)).collect();
    let mut engine = Engine::new(g.clone(), inst.costs.clone(), restricted, cap)?;
    let mut root = engine.root(e);
    if root.s != s {
        // Profiles are oriented by the skeleton; present them from `s`.
        root = flipped_root(&mut engine, root);
    }
    Ok(StProfile { engine, root })
}

fn flipped_root(engine: &mut Engine, root: Root) -> Root {
    let expr = engine.flip_expr(root.expr);
    Root { expr, edge: root.edge, s: root.t, t: root.s }
}

/// Like [`solve`], with the instance's poles required on the outer face. A
/// free virtual edge `st` is drawn on the outer face and removed afterwards,
/// so both poles need a free incidence and the graph plus `st` must be
/// biconnected.
pub fn solve_with_poles(inst: &Instance, mode: Mode, opts: &SolveOptions) -> Result<Solution, SolveError> {
    check(inst, mode != Mode::FlexDraw)?;
    let (s, t) = inst.poles.ok_or(SolveError::NoPoleEdge)?;
    let g = &inst.graph;
    if g.degree(s) >= 4 || g.degree(t) >= 4 {
        return Err(SolveError::Invalid(vec![Violation::Degree(inst.vertex_names[if g.degree(s) >= 4 { s } else { t }].clone(), 5)]));
    }
    let name = match mode {
        Mode::FlexDraw => "flexdraw",
        Mode::Optimal => "optimal",
        Mode::SpOptimal => "sp-optimal",
    };
    let cap = opts.bend_cap.unwrap_or_else(|| default_cap(inst));
    let mut ext = inst.clone();
    ext.costs = if mode == Mode::FlexDraw { feasibility_costs(&inst.costs) } else { inst.costs.clone() };
    ext.embedding = None;
    ext.add_edge(s, t, EdgeCost::Flex(cap.max(0) as u32));
    let m = g.m();
    with_stack(|| {
        let st = solve_st(&ext, s, t, &SolveOptions { bend_cap: Some(cap) })?;
        if mode == Mode::SpOptimal && st.engine.has_rigid() {
            return Err(SolveError::NotSeriesParallel);
        }
        let p = st.profile();
        let mut best: Option<(f64, u8, u8, i32)> = None;
        'outer: for (sigma, tau) in p.pairs() {
            for pc in p.pieces(sigma, tau) {
                if best.is_none_or(|b| pc.cost < b.0) {
                    best = Some((pc.cost, sigma, tau, pc.lo));
                    if mode == Mode::FlexDraw {
                        break 'outer;
                    }
                }
            }
        }
        let Some((total, sigma, tau, r)) = best else { return Ok(Solution::infeasible(name)) };
        let w = st.witness(sigma, tau, r).ok_or_else(|| SolveError::Internal("no witness for the pole entry".into()))?;
        let keep: Vec<EdgeId> = (0..m).collect();
        let (w, _) = w.restrict_to(&keep);
        finish(inst, w, total, mode, name, None, Vec::new())
    })
}

/// Minimum-cost representation for one fixed embedding (convex costs).
pub fn solve_fixed_embedding(inst: &Instance, emb: &RotationSystem) -> Result<Solution, SolveError> {
    check(inst, false)?;
    let g: &Graph = &inst.graph;
    emb.check_planar(g).map_err(|e| SolveError::Embedding(e.to_string()))?;
    if let Some(e) = inst.costs.iter().position(|c| !c.is_convex()) {
        return Err(SolveError::NonConvex(e));
    }
    let cap = default_cap(inst).max(0) as u32;
    let rn = network_for_costs(g, emb, &inst.costs, cap, true).map_err(|e| match e {
        NetworkError::NonConvex(e) => SolveError::NonConvex(e),
        other => SolveError::Internal(other.to_string()),
    })?;
    let Some((flow, total)) = min_cost(&rn.net) else { return Ok(Solution::infeasible("fixed-embedding")) };
    let w = rn.flow_to_rep(&flow);
    finish(inst, w, total, Mode::Optimal, "fixed-embedding", None, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(n: usize, edges: &[(usize, usize)], len: usize) -> Instance {
        let g = Graph::from_edges(n, edges);
        let m = g.m();
        Instance::new(g, vec![EdgeCost::Table((0..len).map(|b| b as f64).collect()); m])
    }

    #[test]
    fn triangle_costs_one() {
        let inst = linear(3, &[(0, 1), (1, 2), (2, 0)], 6);
        assert_eq!(solve_optimal(&inst).unwrap().cost, Some(1.0));
        assert_eq!(solve_sp_optimal(&inst).unwrap().cost, Some(1.0));
    }

    #[test]
    fn path_and_tree_cost_zero() {
        let inst = linear(3, &[(0, 1), (1, 2)], 4);
        assert_eq!(solve_sp_optimal(&inst).unwrap().cost, Some(0.0));
        let inst = linear(5, &[(0, 1), (0, 2), (0, 3), (0, 4)], 4);
        let s = solve_optimal(&inst).unwrap();
        assert_eq!(s.cost, Some(0.0));
        assert!(s.witness.unwrap().is_valid());
        let inst = linear(4, &[(3, 0), (1, 3), (2, 1)], 4);
        assert_eq!(solve_flexdraw_fpt(&inst).unwrap().status, Status::Feasible);
    }

    #[test]
    fn two_triangles_at_a_cutvertex() {
        let inst = linear(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)], 6);
        let s = solve_optimal(&inst).unwrap();
        assert_eq!(s.cost, Some(2.0));
        assert_eq!(s.blocks.len(), 2);
    }

    #[test]
    fn digon_tables() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let inst = Instance::new(g, vec![EdgeCost::Table(vec![0.0, 5.0]), EdgeCost::Table(vec![0.0, 1.0])]);
        assert_eq!(solve_sp_optimal(&inst).unwrap().cost, Some(6.0));
    }

    #[test]
    fn octahedron_boundary() {
        let oct = [(0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2), (5, 3), (5, 4), (1, 2), (2, 3), (3, 4), (4, 1)];
        let two = Instance::from_edges(6, &oct, 2);
        assert!(!solve_flexdraw_fpt(&two).unwrap().is_feasible());
        let three = Instance::from_edges(6, &oct, 3);
        let s = solve_flexdraw_fpt(&three).unwrap();
        assert!(s.is_feasible());
        assert!(s.bends.iter().all(|&b| b <= 3));
    }

    #[test]
    fn k4_rigid_sp_refused() {
        let inst = Instance::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 2);
        assert_eq!(solve_sp_optimal(&inst).unwrap_err(), SolveError::NotSeriesParallel);
        assert!(solve_flexdraw_fpt(&inst).unwrap().is_feasible());
    }

    #[test]
    fn st_digon_profile() {
        let inst = Instance::from_edges(2, &[(0, 1), (0, 1)], 1);
        let st = solve_st(&inst, 0, 1, &SolveOptions::default()).unwrap();
        assert_eq!(st.profile().bend_costs(2, 2).into_iter().collect::<Vec<_>>(), vec![(1, 0.0)]);
    }

    #[test]
    fn fixed_embeddings() {
        let sq = linear(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 4);
        let emb = crate::planar::planar_embedding(&sq.graph).unwrap();
        assert_eq!(solve_fixed_embedding(&sq, &emb).unwrap().cost, Some(0.0));
        let tri = linear(3, &[(0, 1), (1, 2), (2, 0)], 4);
        let emb = crate::planar::planar_embedding(&tri.graph).unwrap();
        assert_eq!(solve_fixed_embedding(&tri, &emb).unwrap().cost, Some(1.0));
        let g = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let dig = Instance::new(g, vec![EdgeCost::Table(vec![0.0, 0.0]); 2]);
        let emb = crate::planar::planar_embedding(&dig.graph).unwrap();
        let s = solve_fixed_embedding(&dig, &emb).unwrap();
        assert_eq!((s.cost, s.bends.clone()), (Some(0.0), vec![1, 1]));
    }

    #[test]
    fn poles_end_on_the_outer_face() {
        let b = crate::gadgets::bend_gadget_b12().instance;
        let (s, t) = b.poles.unwrap();
        for mode in [Mode::FlexDraw, Mode::Optimal] {
            let sol = solve_with_poles(&b, mode, &SolveOptions::default()).unwrap();
            let (beta, _, _) = sol.witness.as_ref().unwrap().bends_st(s, t).unwrap();
            assert!((1..=2).contains(&beta));
            assert_eq!(sol.to_json(&b)["poles"]["bends"], beta);
        }
        let mut tri = Instance::from_edges(3, &[(0, 1), (1, 2), (2, 0)], 1);
        tri.poles = Some((0, 2));
        assert_eq!(solve_with_poles(&tri, Mode::Optimal, &SolveOptions::default()).unwrap().cost, Some(0.0));
    }
}

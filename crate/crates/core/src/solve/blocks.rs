//! Blocks of a connected graph: per-block optima and their assembly.
//!
//! A block hanging below a cutvertex `v` must have `v` on its outer face and
//! leave room there for the other `D - d` edges at `v`, which caps its
//! occupancy at `v` by `4 - D + d`. A block whose degree at a cutvertex is 2
//! while another block there also has degree 2 keeps a 90° angle at that
//! vertex, so the other block fits into the 270° angle.

use super::engine::{Engine, Root};
use crate::compose::edge_profile;
use crate::decomposition::{BcTree, SpqrError};
use crate::embedding::RotationSystem;
use crate::graph::{Dart, EdgeId, Graph, VertexId};
use crate::model::EdgeCost;
use crate::ortho::OrthoRep;
use std::collections::HashMap;

/// A chosen profile entry of one block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pick {
    /// Local reference edge, poles and entry.
    pub edge: EdgeId,
    pub s: VertexId,
    pub t: VertexId,
    pub sigma: u8,
    pub tau: u8,
    pub r: i32,
    pub cost: f64,
}

pub struct Block {
    /// Global edge per local edge.
    pub edges: Vec<EdgeId>,
    /// Global vertex per local vertex.
    pub verts: Vec<VertexId>,
    pub graph: Graph,
    pub costs: Vec<EdgeCost>,
    pub restricted: Vec<bool>,
    engine: Option<Engine>,
    cap: i32,
}

impl Block {
    pub fn new(g: &Graph, costs: &[EdgeCost], edges: &[EdgeId], restricted_global: &[bool], cap: i32) -> Result<Block, SpqrError> {
        let mut verts: Vec<VertexId> = edges.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
        verts.sort_unstable();
        verts.dedup();
        let loc = |v: VertexId| verts.binary_search(&v).unwrap();
        let mut lg = Graph::new(verts.len());
        for &e in edges {
            let (a, b) = g.endpoints(e);
            lg.add_edge(loc(a), loc(b));
        }
        let lc: Vec<EdgeCost> = edges.iter().map(|&e| costs[e].clone()).collect();
        let restricted: Vec<bool> = verts.iter().map(|&v| restricted_global[v]).collect();
        let engine = if edges.len() > 1 {
            Some(Engine::new(lg.clone(), lc.clone(), restricted.clone(), cap)?)
        } else {
            None
        };
        Ok(Block { edges: edges.to_vec(), verts, graph: lg, costs: lc, restricted, engine, cap })
    }

    pub fn local(&self, v: VertexId) -> Option<VertexId> {
        self.verts.binary_search(&v).ok()
    }

    pub fn has_rigid(&self) -> bool {
        self.engine.as_ref().is_some_and(|e| e.has_rigid())
    }

    /// Cheapest entry, optionally with local vertex `at.0` on the outer face
    /// and occupying at most `at.1` incidences there. With `first`, any
    /// finite entry is returned as soon as one is found.
    pub fn best(&mut self, at: Option<(VertexId, u8)>, first: bool) -> Option<Pick> {
        let Some(en) = self.engine.as_mut() else {
            let p = edge_profile(&self.costs[0], self.cap);
            let pc = p.pieces(1, 1).iter().min_by(|a, b| a.cost.total_cmp(&b.cost))?;
            let r = if pc.lo <= 0 && 0 <= pc.hi { 0 } else { pc.lo };
            return Some(Pick { edge: 0, s: 0, t: 1, sigma: 1, tau: 1, r, cost: pc.cost });
        };
        let refs: Vec<EdgeId> = match at {
            Some((v, _)) => self.graph.out_darts(v).iter().map(|d| d.edge()).collect(),
            None => (0..self.graph.m()).collect(),
        };
        let mut best: Option<Pick> = None;
        for e in refs {
            let root = en.root(e);
            let p = en.profile(root.expr);
            for (sigma, tau) in p.pairs() {
                if !pole_ok(&self.restricted, at, root.s, sigma) || !pole_ok(&self.restricted, at, root.t, tau) {
                    continue;
                }
                for pc in p.pieces(sigma, tau) {
                    if best.is_none_or(|b| pc.cost < b.cost) {
                        best = Some(Pick { edge: e, s: root.s, t: root.t, sigma, tau, r: pc.lo, cost: pc.cost });
                        if first {
                            return best;
                        }
                    }
                }
            }
        }
        best
    }

    /// Local representation for a pick.
    pub fn witness(&self, p: &Pick) -> Option<OrthoRep> {
        let Some(en) = self.engine.as_ref() else {
            let d = Dart::new(0, false);
            let mut rot = vec![vec![d], vec![d.rev()]];
            if self.graph.tail(d) != 0 {
                rot.swap(0, 1);
            }
            let emb = RotationSystem::new(&self.graph, rot, Some(d)).ok()?;
            return Some(OrthoRep::plain(self.graph.clone(), emb, vec![p.r, -p.r], vec![-2, -2]));
        };
        let root = Root { expr: en.roots_expr(p.edge)?, edge: p.edge, s: p.s, t: p.t };
        en.witness(root, p.sigma, p.tau, p.r)
    }
}

fn pole_ok(restricted: &[bool], at: Option<(VertexId, u8)>, v: VertexId, occ: u8) -> bool {
    if restricted[v] && occ == 3 {
        return false;
    }
    match at {
        Some((w, cap)) if w == v => occ <= cap,
        _ => true,
    }
}

/// Cutvertex flags: in-block degree 2 with another block of degree 2 there.
pub fn restrictions(g: &Graph, bc: &BcTree) -> Vec<Vec<bool>> {
    let mut out: Vec<Vec<bool>> = vec![vec![false; g.n()]; bc.blocks.len()];
    for &v in &bc.cutvertices {
        let ds: Vec<(usize, usize)> = bc.blocks_at[v].iter().map(|&b| (b, bc.degree_in(g, b, v))).collect();
        for &(b, d) in &ds {
            if d == 2 && ds.iter().any(|&(c, dc)| c != b && dc == 2) {
                out[b][v] = true;
            }
        }
    }
    out
}

/// Rotations of the whole graph, filled block by block.
pub struct Assembly {
    rot: Vec<Vec<Dart>>,
    rd: Vec<i32>,
    rc: Vec<i32>,
    outer: Option<Dart>,
}

impl Assembly {
    pub fn new(g: &Graph) -> Assembly {
        Assembly { rot: vec![Vec::new(); g.n()], rd: vec![0; 2 * g.m()], rc: vec![0; 2 * g.m()], outer: None }
    }

    /// Adds a block representation. The first block fixes the outer face;
    /// later ones are placed into a corner at their attachment vertex.
    pub fn add(&mut self, b: &Block, rep: &OrthoRep, attach: Option<VertexId>) -> Result<(), String> {
        let gd = |d: Dart| Dart::new(b.edges[d.edge()], !d.is_forward());
        for i in 0..2 * b.graph.m() {
            let g = gd(Dart(i as u32));
            self.rd[g.idx()] = rep.rot_dart[i];
            self.rc[g.idx()] = rep.rot_corner[i];
        }
        for w in 0..b.graph.n() {
            if Some(b.verts[w]) != attach {
                self.rot[b.verts[w]] = rep.emb.rotation(w).iter().map(|&d| gd(d)).collect();
            }
        }
        let Some(v) = attach else {
            self.outer = rep.emb.outer_dart().map(gd);
            return Ok(());
        };
        let lv = b.local(v).ok_or("attachment vertex outside block")?;
        let y0 = gd(rep.outer_entry(lv).ok_or("attachment vertex not on the outer face")?);
        let inner: Vec<Dart> = rep.darts_after_outer(lv).ok_or("no outer corner")?.into_iter().map(gd).collect();
        // Angles in units of 90°: a corner of rotation c spans 2 - c.
        let outer_angle = 2 - rep.rot_corner[rep.outer_entry(lv).unwrap().idx()];
        let need = 4 - outer_angle;
        let list = &self.rot[v];
        let host = (0..list.len())
            .map(|p| (p, 2 - self.rc[list[p].rev().idx()]))
            .filter(|&(_, a)| a - need >= 2)
            .min_by_key(|&(p, a)| (a, p))
            .ok_or_else(|| format!("no corner at vertex {v} can hold the block"))?;
        let (p, a) = host;
        let x = list[p].rev();
        self.rc[x.idx()] = 1;
        self.rc[y0.idx()] = 2 - (a - need - 1);
        let mut new = list[..=p].to_vec();
        new.extend(inner);
        new.extend_from_slice(&list[p + 1..]);
        self.rot[v] = new;
        Ok(())
    }

    pub fn finish(self, g: &Graph) -> Result<OrthoRep, String> {
        let emb = RotationSystem::new(g, self.rot, self.outer).map_err(|e| e.to_string())?;
        Ok(OrthoRep::plain(g.clone(), emb, self.rd, self.rc))
    }
}

/// Parent cutvertex of every block when the block-cut tree is rooted at `root`,
/// and the blocks in top-down order.
pub fn rooted(bc: &BcTree, root: usize) -> (Vec<Option<VertexId>>, Vec<usize>) {
    let nb = bc.blocks.len();
    let mut parent = vec![None; nb];
    let mut seen = vec![false; nb];
    let mut order = vec![root];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let b = order[i];
        i += 1;
        for &v in &bc.block_vertices[b] {
            for &c in &bc.blocks_at[v] {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = Some(v);
                    order.push(c);
                }
            }
        }
    }
    (parent, order)
}

/// Memoized block optima per role.
pub struct Roles {
    pub blocks: Vec<Block>,
    cache: HashMap<(usize, Option<VertexId>), Option<Pick>>,
    caps: HashMap<(usize, VertexId), u8>,
    first: bool,
}

impl Roles {
    pub fn new(g: &Graph, bc: &BcTree, blocks: Vec<Block>, first: bool) -> Roles {
        let mut caps = HashMap::new();
        for &v in &bc.cutvertices {
            for &b in &bc.blocks_at[v] {
                let d = bc.degree_in(g, b, v);
                caps.insert((b, v), (4 + d - g.degree(v)) as u8);
            }
        }
        Roles { blocks, cache: HashMap::new(), caps, first }
    }

    /// Best entry of block `b`, below cutvertex `attach` if given.
    pub fn pick(&mut self, b: usize, attach: Option<VertexId>) -> Option<Pick> {
        if let Some(p) = self.cache.get(&(b, attach)) {
            return *p;
        }
        let at = attach.map(|v| (self.blocks[b].local(v).unwrap(), self.caps[&(b, v)]));
        let p = self.blocks[b].best(at, self.first);
        self.cache.insert((b, attach), p);
        p
    }
}

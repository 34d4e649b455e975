//! Profiles of a biconnected graph over its SPQR-tree, with witnesses.
//!
//! Every pertinent graph becomes an expression over edges, flips, series,
//! parallel, choice and rigid compositions. Expressions are memoized per
//! (node, parent edge), so re-rooting at another reference edge only builds
//! the nodes whose parent changed. Realizing an expression writes rotations
//! for all darts and corners of its pertinent graph except the two outer pole
//! corners, and returns the pole rotation lists.

use crate::compose::{
    choice, edge_profile, parallel, rigid, rigid_realize, series, unslot, ParallelChoice, Profile, RigidChoice,
    RigidInput, SeriesChoice,
};
use crate::decomposition::{build_spqr, NodeKind, SkelRef, SpqrError, SpqrTree};
use crate::embedding::RotationSystem;
use crate::graph::{Dart, EdgeId, Graph, VertexId};
use crate::model::EdgeCost;
use crate::ortho::OrthoRep;
use crate::planar::planar_embedding;
use std::collections::HashMap;

pub type ExprId = usize;

#[derive(Clone, Debug)]
enum Kind {
    Edge(Dart),
    Flip(ExprId),
    Series { a: ExprId, b: ExprId, mid: VertexId, choices: Vec<SeriesChoice> },
    Parallel { a: ExprId, b: ExprId, choices: Vec<ParallelChoice> },
    Choice { opts: Vec<ExprId>, choices: Vec<(usize, u32)> },
    Rigid { input: RigidInput, local: Vec<VertexId>, kids: Vec<ExprId>, choices: Vec<RigidChoice> },
}

#[derive(Clone, Debug)]
struct Expr {
    kind: Kind,
    profile: Profile,
    /// Degree at the two poles.
    deg: (u8, u8),
}

/// Whole-graph expression for one reference edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Root {
    pub expr: ExprId,
    pub edge: EdgeId,
    pub s: VertexId,
    pub t: VertexId,
}

/// Rotations under construction.
struct Canvas {
    rot: Vec<Vec<Dart>>,
    rd: Vec<i32>,
    rc: Vec<i32>,
}

pub struct Engine {
    pub graph: Graph,
    costs: Vec<EdgeCost>,
    restricted: Vec<bool>,
    cap: i32,
    pub tree: SpqrTree,
    exprs: Vec<Expr>,
    memo: HashMap<(usize, usize), ExprId>,
    edges: HashMap<(EdgeId, VertexId), ExprId>,
    flips: HashMap<ExprId, ExprId>,
    roots: HashMap<EdgeId, Root>,
}

impl Engine {
    /// `restricted[v]` forces 90° angles at `v` when it is the middle vertex
    /// of a series composition.
    pub fn new(graph: Graph, costs: Vec<EdgeCost>, restricted: Vec<bool>, cap: i32) -> Result<Engine, SpqrError> {
        let tree = build_spqr(&graph, 0)?;
        Ok(Engine {
            graph,
            costs,
            restricted,
            cap,
            tree,
            exprs: Vec::new(),
            memo: HashMap::new(),
            edges: HashMap::new(),
            flips: HashMap::new(),
            roots: HashMap::new(),
        })
    }

    pub fn profile(&self, id: ExprId) -> &Profile {
        &self.exprs[id].profile
    }

    pub fn has_rigid(&self) -> bool {
        self.tree.nodes.iter().any(|n| n.kind == NodeKind::R)
    }

    fn push(&mut self, kind: Kind, profile: Profile, deg: (u8, u8)) -> ExprId {
        self.exprs.push(Expr { kind, profile, deg });
        self.exprs.len() - 1
    }

    fn edge(&mut self, e: EdgeId, from: VertexId) -> ExprId {
        if let Some(&id) = self.edges.get(&(e, from)) {
            return id;
        }
        let p = edge_profile(&self.costs[e], self.cap);
        let d = self.graph.dart_from(e, from);
        let id = self.push(Kind::Edge(d), p, (1, 1));
        self.edges.insert((e, from), id);
        id
    }

    fn flip(&mut self, id: ExprId) -> ExprId {
        if let Some(&f) = self.flips.get(&id) {
            return f;
        }
        let p = self.exprs[id].profile.flipped();
        let (a, b) = self.exprs[id].deg;
        let f = self.push(Kind::Flip(id), p, (b, a));
        self.flips.insert(id, f);
        f
    }

    /// The same expression seen with its poles swapped.
    pub fn flip_expr(&mut self, id: ExprId) -> ExprId {
        self.flip(id)
    }

    fn series(&mut self, a: ExprId, b: ExprId, mid: VertexId) -> ExprId {
        let (p, choices) = series(&self.exprs[a].profile, &self.exprs[b].profile, self.restricted[mid], self.cap);
        let deg = (self.exprs[a].deg.0, self.exprs[b].deg.1);
        self.push(Kind::Series { a, b, mid, choices }, p, deg)
    }

    fn parallel(&mut self, a: ExprId, b: ExprId) -> ExprId {
        let (p, choices) = parallel(&self.exprs[a].profile, &self.exprs[b].profile, self.cap);
        let (da, db) = (self.exprs[a].deg, self.exprs[b].deg);
        self.push(Kind::Parallel { a, b, choices }, p, (da.0 + db.0, da.1 + db.1))
    }

    fn choice(&mut self, opts: Vec<ExprId>) -> ExprId {
        if opts.len() == 1 {
            return opts[0];
        }
        let ps: Vec<&Profile> = opts.iter().map(|&i| &self.exprs[i].profile).collect();
        let (p, choices) = choice(&ps, self.cap);
        let deg = self.exprs[opts[0]].deg;
        self.push(Kind::Choice { opts, choices }, p, deg)
    }

    /// Expression of skeleton edge `i` of `node`, oriented away from `from`.
    fn skel_child(&mut self, node: usize, i: usize, from: VertexId) -> ExprId {
        let se = self.tree.nodes[node].edges[i];
        match se.r {
            SkelRef::Real(e) => self.edge(e, from),
            SkelRef::Virtual { node: c, edge: ce } => {
                let id = self.node_expr(c, ce);
                if se.u == from {
                    id
                } else {
                    self.flip(id)
                }
            }
        }
    }

    /// Pertinent graph of `node` seen from its skeleton edge `parent`,
    /// oriented from that edge's `u` to its `v`.
    pub fn node_expr(&mut self, node: usize, parent: usize) -> ExprId {
        if let Some(&id) = self.memo.get(&(node, parent)) {
            return id;
        }
        let pe = self.tree.nodes[node].edges[parent];
        let id = match self.tree.nodes[node].kind {
            NodeKind::S => {
                let order = self.tree.cycle_order(node, parent, pe.u);
                let mut acc = self.skel_child(node, order[0].0, order[0].1);
                for &(i, from) in &order[1..] {
                    let next = self.skel_child(node, i, from);
                    acc = self.series(acc, next, from);
                }
                acc
            }
            NodeKind::P => {
                let n = self.tree.nodes[node].edges.len();
                let kids: Vec<ExprId> =
                    (0..n).filter(|&i| i != parent).map(|i| self.skel_child(node, i, pe.u)).collect();
                let mut finals = Vec::new();
                let mut used = vec![false; kids.len()];
                self.orders(&kids, &mut used, None, &mut finals);
                self.choice(finals)
            }
            NodeKind::R => self.rigid_expr(node, parent),
            NodeKind::Q => unreachable!("Q nodes only occur in single-edge graphs"),
        };
        self.memo.insert((node, parent), id);
        id
    }

    /// Parallel folds over all orders of `kids`, sharing common prefixes.
    fn orders(&mut self, kids: &[ExprId], used: &mut [bool], acc: Option<ExprId>, out: &mut Vec<ExprId>) {
        if used.iter().all(|&u| u) {
            out.extend(acc);
            return;
        }
        for i in 0..kids.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let next = match acc {
                None => kids[i],
                Some(a) => self.parallel(a, kids[i]),
            };
            self.orders(kids, used, Some(next), out);
            used[i] = false;
        }
    }

    fn rigid_expr(&mut self, node: usize, parent: usize) -> ExprId {
        let sk = self.tree.nodes[node].clone();
        let (k, vs) = sk.skeleton();
        let loc = |v: VertexId| vs.binary_search(&v).unwrap();
        let emb = planar_embedding(&k).expect("skeletons are planar");
        let mut gp = Graph::new(vs.len());
        let mut jmap = vec![usize::MAX; k.m()];
        let mut kids = Vec::new();
        for (j, se) in sk.edges.iter().enumerate() {
            if j == parent {
                continue;
            }
            jmap[j] = gp.add_edge(loc(se.u), loc(se.v));
            kids.push(self.skel_child(node, j, se.u));
        }
        let md = |d: Dart| Dart::new(jmap[d.edge()], !d.is_forward());
        let rot: Vec<Vec<Dart>> = (0..k.n())
            .map(|w| emb.rotation(w).iter().filter(|d| d.edge() != parent).map(|&d| md(d)).collect())
            .collect();
        let outer = md(emb.succ(&k, Dart::new(parent, false)));
        let remb = RotationSystem::new(&gp, rot, Some(outer)).expect("skeleton minus an edge stays planar");
        let pe = sk.edges[parent];
        let deg: Vec<(u8, u8)> = kids.iter().map(|&i| self.exprs[i].deg).collect();
        let input = RigidInput { graph: gp, emb: remb, s: loc(pe.u), t: loc(pe.v), deg };
        let ps: Vec<&Profile> = kids.iter().map(|&i| &self.exprs[i].profile).collect();
        let (p, choices) = rigid(&input, &ps, self.cap);
        let at = |v: VertexId| -> u8 {
            (0..input.graph.m())
                .map(|i| {
                    let (a, b) = input.graph.endpoints(i);
                    if a == v {
                        input.deg[i].0
                    } else if b == v {
                        input.deg[i].1
                    } else {
                        0
                    }
                })
                .sum()
        };
        let d = (at(input.s), at(input.t));
        self.push(Kind::Rigid { input, local: vs, kids, choices }, p, d)
    }

    /// The graph with reference edge `e` on the outer face.
    pub fn root(&mut self, e: EdgeId) -> Root {
        if let Some(&r) = self.roots.get(&e) {
            return r;
        }
        let (node, idx) = self.tree.home[e];
        let pe = self.tree.nodes[node].edges[idx];
        let x = self.node_expr(node, idx);
        let ed = self.edge(e, pe.u);
        let a = self.parallel(x, ed);
        let b = self.parallel(ed, x);
        let expr = self.choice(vec![a, b]);
        let r = Root { expr, edge: e, s: pe.u, t: pe.v };
        self.roots.insert(e, r);
        r
    }

    /// Expression of the graph without `e`, from one end of `e` to the other.
    pub fn pertinent(&mut self, e: EdgeId) -> Root {
        let (node, idx) = self.tree.home[e];
        let pe = self.tree.nodes[node].edges[idx];
        let expr = self.node_expr(node, idx);
        Root { expr, edge: e, s: pe.u, t: pe.v }
    }

    /// Root expression of an already built reference edge.
    pub fn roots_expr(&self, e: EdgeId) -> Option<ExprId> {
        self.roots.get(&e).map(|r| r.expr)
    }

    /// Representation of the whole graph for a finite profile entry of `root`.
    pub fn witness(&self, root: Root, sigma: u8, tau: u8, r: i32) -> Option<OrthoRep> {
        let g = &self.graph;
        let mut cv = Canvas { rot: vec![Vec::new(); g.n()], rd: vec![0; 2 * g.m()], rc: vec![0; 2 * g.m()] };
        let (at_s, at_t) = self.realize(root.expr, sigma, tau, r, &mut cv)?;
        cv.rc[at_s.last()?.rev().idx()] = sigma as i32 - 3;
        cv.rc[at_t.last()?.rev().idx()] = tau as i32 - 3;
        let outer = at_s[0];
        cv.rot[root.s] = at_s;
        cv.rot[root.t] = at_t;
        let emb = RotationSystem::new(g, cv.rot, Some(outer)).ok()?;
        Some(OrthoRep::plain(g.clone(), emb, cv.rd, cv.rc))
    }

    fn realize(&self, id: ExprId, sigma: u8, tau: u8, r: i32, cv: &mut Canvas) -> Option<(Vec<Dart>, Vec<Dart>)> {
        let ex = &self.exprs[id];
        match &ex.kind {
            Kind::Edge(d) => {
                cv.rd[d.idx()] = r;
                cv.rd[d.rev().idx()] = -r;
                Some((vec![*d], vec![d.rev()]))
            }
            Kind::Flip(c) => {
                let r2 = 2 - sigma as i32 - tau as i32 - r;
                let (a, b) = self.realize(*c, tau, sigma, r2, cv)?;
                Some((b, a))
            }
            Kind::Series { a, b, mid, choices } => {
                let pc = ex.profile.piece_at(sigma, tau, r)?;
                let ch = choices[pc.origin as usize];
                let (pa, pb) = (&self.exprs[*a].profile, &self.exprs[*b].profile);
                let (r1, r2) = ch.split(pa, pb, r);
                let (s1, t1) = unslot(ch.a.0 as usize);
                let (s2, t2) = unslot(ch.b.0 as usize);
                let (as_, at) = self.realize(*a, s1, t1, r1, cv)?;
                let (bs, bt) = self.realize(*b, s2, t2, r2, cv)?;
                cv.rc[at.last()?.rev().idx()] = ch.c1;
                cv.rc[bs.last()?.rev().idx()] = ch.c2;
                cv.rot[*mid] = at.into_iter().chain(bs).collect();
                Some((as_, bt))
            }
            Kind::Parallel { a, b, choices } => {
                let pc = ex.profile.piece_at(sigma, tau, r)?;
                let ch = choices[pc.origin as usize];
                let (ra, rb) = ch.split(r);
                let (sa, ta) = unslot(ch.a.0 as usize);
                let (sb, tb) = unslot(ch.b.0 as usize);
                let (a_s, a_t) = self.realize(*a, sa, ta, ra, cv)?;
                let (b_s, b_t) = self.realize(*b, sb, tb, rb, cv)?;
                cv.rc[a_s.last()?.rev().idx()] = ch.cs;
                cv.rc[b_t.last()?.rev().idx()] = ch.ct;
                Some((a_s.into_iter().chain(b_s).collect(), b_t.into_iter().chain(a_t).collect()))
            }
            Kind::Choice { opts, choices } => {
                let pc = ex.profile.piece_at(sigma, tau, r)?;
                let (k, _) = choices[pc.origin as usize];
                self.realize(opts[k], sigma, tau, r, cv)
            }
            Kind::Rigid { input, local, kids, choices } => {
                let pc = ex.profile.piece_at(sigma, tau, r)?;
                let ch = &choices[pc.origin as usize];
                let ps: Vec<&Profile> = kids.iter().map(|&i| &self.exprs[i].profile).collect();
                let sk = rigid_realize(input, &ps, ch, sigma, tau, r)?;
                let mut ends = Vec::with_capacity(kids.len());
                for (i, &kid) in kids.iter().enumerate() {
                    let (a, b) = ch.widths[i];
                    ends.push(self.realize(kid, a, b, sk.rot_dart[2 * i], cv)?);
                }
                let expand = |d: Dart| -> &Vec<Dart> {
                    if d.is_forward() {
                        &ends[d.edge()].0
                    } else {
                        &ends[d.edge()].1
                    }
                };
                let h = &input.graph;
                let pole = |w: VertexId| w == input.s || w == input.t;
                for w in 0..h.n() {
                    if !pole(w) {
                        cv.rot[local[w]] = sk.emb.rotation(w).iter().flat_map(|&d| expand(d).iter().copied()).collect();
                    }
                }
                for y in 0..2 * h.m() {
                    let y = Dart(y as u32);
                    if pole(h.head(y)) && sk.faces.face(y) == sk.faces.outer {
                        continue;
                    }
                    let key = expand(y.rev()).last()?.rev();
                    cv.rc[key.idx()] = sk.rot_corner[y.idx()];
                }
                let list = |v: VertexId| -> Option<Vec<Dart>> {
                    Some(sk.darts_after_outer(v)?.into_iter().flat_map(|d| expand(d).iter().copied()).collect())
                };
                Some((list(input.s)?, list(input.t)?))
            }
        }
    }
}

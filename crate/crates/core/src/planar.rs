//! Planarity testing and embedding.
//!
//! Blocks are embedded with the path-addition scheme of Demoucron, Malgrange
//! and Pertuiset, then glued at cut vertices by concatenating rotations.
//! Quadratic per block, which is plenty for the graph sizes handled here.

use crate::connectivity::blocks;
use crate::embedding::RotationSystem;
use crate::graph::{Dart, EdgeId, Graph, VertexId};

/// A planar rotation system for `g`, or `None` when `g` is not planar.
pub fn planar_embedding(g: &Graph) -> Option<RotationSystem> {
    if g.has_self_loop() {
        return None;
    }
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); g.n()];
    let (bl, _) = blocks(g);
    for b in &bl {
        let local = embed_block(g, b)?;
        for (v, darts) in local {
            rot[v].extend(darts);
        }
    }
    let rs = RotationSystem::new(g, rot, None).ok()?;
    debug_assert!(rs.check_planar(g).is_ok());
    Some(rs)
}

pub fn is_planar(g: &Graph) -> bool {
    planar_embedding(g).is_some()
}

/// Embeds one block; returns per-vertex rotations restricted to its edges.
fn embed_block(g: &Graph, edges: &[EdgeId]) -> Option<Vec<(VertexId, Vec<Dart>)>> {
    let mut verts: Vec<VertexId> = edges.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() <= 2 || edges.len() <= 2 {
        // A single edge or a bundle of parallel edges.
        let (a, b) = g.endpoints(edges[0]);
        let ra: Vec<Dart> = edges.iter().map(|&e| g.dart_from(e, a)).collect();
        let rb: Vec<Dart> = edges.iter().rev().map(|&e| g.dart_from(e, b)).collect();
        return Some(vec![(a, ra), (b, rb)]);
    }
    let mut st = Dmp::new(g, edges, &verts);
    st.run()?;
    Some(verts.iter().map(|&v| (v, std::mem::take(&mut st.rot[v]))).collect())
}

struct Dmp<'a> {
    g: &'a Graph,
    in_block: Vec<bool>,
    edge_done: Vec<bool>,
    vert_done: Vec<bool>,
    rot: Vec<Vec<Dart>>,
    todo: usize,
}

impl<'a> Dmp<'a> {
    fn new(g: &'a Graph, edges: &[EdgeId], verts: &[VertexId]) -> Self {
        let mut in_block = vec![false; g.m()];
        for &e in edges {
            in_block[e] = true;
        }
        let _ = verts;
        Dmp {
            g,
            in_block,
            edge_done: vec![false; g.m()],
            vert_done: vec![false; g.n()],
            rot: vec![Vec::new(); g.n()],
            todo: edges.len(),
        }
    }

    fn block_darts(&self, v: VertexId) -> impl Iterator<Item = Dart> + '_ {
        self.g.out_darts(v).iter().copied().filter(|d| self.in_block[d.edge()])
    }

    fn insert_after(&mut self, v: VertexId, after: Option<Dart>, d: Dart) {
        let list = &mut self.rot[v];
        match after {
            None => list.push(d),
            Some(a) => {
                let i = list.iter().position(|&x| x == a).expect("corner dart present");
                list.insert(i + 1, d);
            }
        }
    }

    fn succ(&self, d: Dart) -> Dart {
        let list = &self.rot[self.g.tail(d)];
        let i = list.iter().position(|&x| x == d).unwrap();
        list[(i + 1) % list.len()]
    }

    fn run(&mut self) -> Option<()> {
        let cyc = self.initial_cycle();
        let k = cyc.len();
        for i in 0..k {
            let d = cyc[i];
            let prev = cyc[(i + k - 1) % k];
            let v = self.g.tail(d);
            self.rot[v] = vec![d, prev.rev()];
            self.vert_done[v] = true;
            self.edge_done[d.edge()] = true;
        }
        self.todo -= k;
        while self.todo > 0 {
            let faces = self.faces();
            // Faces on which each embedded vertex lies, with the entering dart there.
            let mut at: Vec<Vec<(usize, Dart)>> = vec![Vec::new(); self.g.n()];
            for (fi, f) in faces.iter().enumerate() {
                for &d in f {
                    at[self.g.head(d)].push((fi, d));
                }
            }
            let frags = self.fragments();
            let mut best: Option<(usize, usize, usize)> = None; // (count, frag, face)
            for (i, fr) in frags.iter().enumerate() {
                let mut adm: Vec<usize> = at[fr.attach[0]].iter().map(|&(f, _)| f).collect();
                adm.sort_unstable();
                adm.dedup();
                for &a in &fr.attach[1..] {
                    adm.retain(|&f| at[a].iter().any(|&(g, _)| g == f));
                }
                if adm.is_empty() {
                    return None;
                }
                if best.is_none_or(|(c, _, _)| adm.len() < c) {
                    best = Some((adm.len(), i, adm[0]));
                    if adm.len() == 1 {
                        break;
                    }
                }
            }
            let (_, fi, face) = best?;
            let path = self.path_in(&frags[fi]);
            let a = self.g.tail(path[0]);
            let b = self.g.head(*path.last().unwrap());
            let corner = |v: VertexId| at[v].iter().find(|&&(f, _)| f == face).map(|&(_, d)| d.rev()).unwrap();
            let ca = corner(a);
            let cb = corner(b);
            self.insert_after(a, Some(ca), path[0]);
            self.insert_after(b, Some(cb), path.last().unwrap().rev());
            for w in path.windows(2) {
                let v = self.g.head(w[0]);
                self.rot[v] = vec![w[0].rev(), w[1]];
                self.vert_done[v] = true;
            }
            for d in &path {
                self.edge_done[d.edge()] = true;
            }
            self.todo -= path.len();
        }
        Some(())
    }

    fn initial_cycle(&self) -> Vec<Dart> {
        // Close a shortest path between the ends of some edge into a cycle.
        let g = self.g;
        let e0 = self.in_block.iter().position(|&b| b).unwrap();
        let (u, v) = g.endpoints(e0);
        let mut via: Vec<Option<Dart>> = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        seen[u] = true;
        let mut q = std::collections::VecDeque::from([u]);
        while let Some(x) = q.pop_front() {
            for d in self.block_darts(x) {
                let w = g.head(d);
                if d.edge() == e0 || seen[w] {
                    continue;
                }
                seen[w] = true;
                via[w] = Some(d);
                q.push_back(w);
            }
        }
        let mut cyc = Vec::new();
        let mut x = v;
        while x != u {
            let d = via[x].expect("blocks are 2-edge-connected");
            cyc.push(d);
            x = g.tail(d);
        }
        cyc.reverse();
        cyc.push(g.dart_from(e0, v));
        cyc
    }

    fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; 2 * self.g.m()];
        let mut out = Vec::new();
        for v in 0..self.g.n() {
            for &d0 in &self.rot[v] {
                if seen[d0.idx()] {
                    continue;
                }
                let mut f = Vec::new();
                let mut d = d0;
                while !seen[d.idx()] {
                    seen[d.idx()] = true;
                    f.push(d);
                    d = self.succ(d.rev());
                }
                out.push(f);
            }
        }
        out
    }

    fn fragments(&self) -> Vec<Fragment> {
        let g = self.g;
        let mut frags = Vec::new();
        for e in 0..g.m() {
            if self.in_block[e] && !self.edge_done[e] {
                let (u, v) = g.endpoints(e);
                if self.vert_done[u] && self.vert_done[v] {
                    frags.push(Fragment { attach: vec![u, v], inner: Vec::new(), seed: Dart::new(e, false) });
                }
            }
        }
        let mut comp = vec![usize::MAX; g.n()];
        for s in 0..g.n() {
            if self.vert_done[s] || comp[s] != usize::MAX || self.block_darts(s).next().is_none() {
                continue;
            }
            let id = frags.len();
            comp[s] = id;
            let mut inner = vec![s];
            let mut attach = Vec::new();
            let mut stack = vec![s];
            let mut seed = None;
            while let Some(v) = stack.pop() {
                for d in self.block_darts(v) {
                    let w = g.head(d);
                    if self.vert_done[w] {
                        attach.push(w);
                        if seed.is_none() {
                            seed = Some(d.rev());
                        }
                    } else if comp[w] == usize::MAX {
                        comp[w] = id;
                        inner.push(w);
                        stack.push(w);
                    }
                }
            }
            attach.sort_unstable();
            attach.dedup();
            frags.push(Fragment { attach, inner, seed: seed.expect("fragment attaches to the embedded part") });
        }
        frags
    }

    /// A path through the fragment between two distinct attachment vertices.
    fn path_in(&self, fr: &Fragment) -> Vec<Dart> {
        if fr.inner.is_empty() {
            return vec![fr.seed];
        }
        let g = self.g;
        let a = g.tail(fr.seed);
        let mut via: Vec<Option<Dart>> = vec![None; g.n()];
        let mut q = std::collections::VecDeque::new();
        let first = g.head(fr.seed);
        via[first] = Some(fr.seed);
        q.push_back(first);
        while let Some(v) = q.pop_front() {
            for d in self.block_darts(v) {
                if self.edge_done[d.edge()] || Some(d.rev()) == via[v] {
                    continue;
                }
                let w = g.head(d);
                if self.vert_done[w] {
                    if w == a {
                        continue;
                    }
                    let mut path = vec![d];
                    let mut x = v;
                    while let Some(p) = via[x] {
                        path.push(p);
                        x = g.tail(p);
                        if x == a {
                            break;
                        }
                    }
                    path.reverse();
                    return path;
                }
                if via[w].is_none() && w != first {
                    via[w] = Some(d);
                    q.push_back(w);
                }
            }
        }
        unreachable!("fragments of a block have two attachments")
    }
}

struct Fragment {
    attach: Vec<VertexId>,
    inner: Vec<VertexId>,
    /// A dart from an attachment vertex into the fragment.
    seed: Dart,
}

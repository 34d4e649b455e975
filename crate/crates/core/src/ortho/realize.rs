//! Grid drawings from orthogonal representations.
//!
//! Bends become dummy vertices, every dart gets a compass direction, an
//! enclosing box is attached to the outer face, reflex corners are cut off
//! until every inner face is a rectangle, and coordinates come from longest
//! paths over the horizontal and vertical constraint graphs.

use super::rep::OrthoRep;
use crate::graph::{Dart, EdgeId, VertexId};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDrawing {
    pub pos: Vec<(i64, i64)>,
    /// Polyline per edge from `edges[e][0]` to `edges[e][1]`, bends included.
    pub paths: Vec<Vec<(i64, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("representation is invalid")]
    Invalid,
    #[error("thick edges must be substituted first")]
    Thick,
    #[error("rotations are inconsistent with a grid drawing")]
    Inconsistent,
}


/// Directions are 0 = east, 1 = north, 2 = west, 3 = south.
struct Work {
    edges: Vec<[usize; 2]>,
    /// Direction of the forward dart of each edge.
    dir: Vec<u8>,
    nv: usize,
}

impl Work {
    fn dart_dir(&self, d: Dart) -> u8 {
        let f = self.dir[d.edge()];
        if d.is_forward() {
            f
        } else {
            (f + 2) % 4
        }
    }
    fn tail(&self, d: Dart) -> usize {
        self.edges[d.edge()][(!d.is_forward()) as usize]
    }
    fn head(&self, d: Dart) -> usize {
        self.edges[d.edge()][d.is_forward() as usize]
    }
    fn add_edge(&mut self, a: usize, b: usize, dir: u8) -> usize {
        self.edges.push([a, b]);
        self.dir.push(dir);
        self.edges.len() - 1
    }
    fn add_vertex(&mut self) -> usize {
        self.nv += 1;
        self.nv - 1
    }

    /// Rotation slot per vertex and direction (at most one dart each).
    fn slots(&self) -> Result<Vec<[Option<Dart>; 4]>, RealizeError> {
        let mut s = vec![[None; 4]; self.nv];
        for e in 0..self.edges.len() {
            for back in [false, true] {
                let d = Dart::new(e, back);
                let slot = &mut s[self.tail(d)][self.dart_dir(d) as usize];
                if slot.is_some() {
                    return Err(RealizeError::Inconsistent);
                }
                *slot = Some(d);
            }
        }
        Ok(s)
    }

    /// Faces with the face on the right, from direction-sorted rotations.
    fn faces(&self, slots: &[[Option<Dart>; 4]]) -> Vec<Vec<Dart>> {
        let nd = 2 * self.edges.len();
        let mut seen = vec![false; nd];
        let mut out = Vec::new();
        for i in 0..nd {
            if seen[i] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut d = Dart(i as u32);
            while !seen[d.idx()] {
                seen[d.idx()] = true;
                cyc.push(d);
                d = self.next(slots, d);
            }
            out.push(cyc);
        }
        out
    }

    fn next(&self, slots: &[[Option<Dart>; 4]], d: Dart) -> Dart {
        let r = d.rev();
        let v = self.tail(r);
        let k = self.dart_dir(r);
        (1..=4).find_map(|i| slots[v][((k + i) % 4) as usize]).unwrap()
    }

    /// Turn at the head of `d` towards `next`: +1 right, 0 straight, -1 left, -2 back.
    fn turn(&self, d: Dart, next: Dart) -> i32 {
        match (self.dart_dir(d) as i32 - self.dart_dir(next) as i32).rem_euclid(4) {
            1 => 1,
            0 => 0,
            3 => -1,
            _ => -2,
        }
    }
}

pub fn realize(r: &OrthoRep) -> Result<GridDrawing, RealizeError> {
    let g = &r.graph;
    if r.widths.iter().any(|&w| w != (1, 1)) {
        return Err(RealizeError::Thick);
    }
    if !r.validate().is_empty() {
        return Err(RealizeError::Invalid);
    }
    if g.m() == 0 {
        return Ok(GridDrawing { pos: vec![(0, 0); g.n()], paths: Vec::new() });
    }
    // Subdivide bends. Chain darts run along each original forward dart.
    let mut w = Work { edges: Vec::new(), dir: Vec::new(), nv: g.n() };
    let mut chain_nodes: Vec<Vec<usize>> = Vec::new();
    let mut chain_edges: Vec<Vec<EdgeId>> = Vec::new();
    for e in 0..g.m() {
        let (a, b) = g.endpoints(e);
        let k = r.rot_dart[2 * e].unsigned_abs() as usize;
        let mut nodes = vec![a];
        for _ in 0..k {
            nodes.push(w.add_vertex());
        }
        nodes.push(b);
        let mut es = Vec::new();
        for p in nodes.windows(2) {
            es.push(w.add_edge(p[0], p[1], u8::MAX));
        }
        chain_nodes.push(nodes);
        chain_edges.push(es);
    }
    // Propagate directions from one dart: along chains by bend turns, around
    // vertices by corner angles. `base` holds the forward direction per edge.
    let mut base: Vec<Option<u8>> = vec![None; g.m()];
    let leave_dir = |d: Dart, fwd: u8| -> u8 {
        if d.is_forward() {
            fwd
        } else {
            (fwd as i32 - r.rot_dart[2 * d.edge()] + 2).rem_euclid(4) as u8
        }
    };
    let mut stack = vec![Dart(0), Dart(1)];
    base[0] = Some(0);
    while let Some(d) = stack.pop() {
        let leave = leave_dir(d, base[d.edge()].unwrap());
        let nd = r.emb.succ(g, d);
        let c = r.rot_corner[d.rev().idx()];
        let ndir = (leave as i32 + 2 - c).rem_euclid(4);
        let fwd = if nd.is_forward() { ndir } else { ndir + r.rot_dart[2 * nd.edge()] + 2 }.rem_euclid(4) as u8;
        match base[nd.edge()] {
            Some(f) if f != fwd => return Err(RealizeError::Inconsistent),
            Some(_) => {}
            None => {
                base[nd.edge()] = Some(fwd);
                stack.push(Dart::new(nd.edge(), false));
                stack.push(Dart::new(nd.edge(), true));
            }
        }
    }
    for e in 0..g.m() {
        let step = -r.rot_dart[2 * e].signum();
        let mut dir = base[e].ok_or(RealizeError::Inconsistent)? as i32;
        for &ce in &chain_edges[e] {
            w.dir[ce] = dir.rem_euclid(4) as u8;
            dir += step;
        }
    }
    w.slots()?;
    // Enclosing box, attached through a connector from a wide outer corner.
    let outer_cycle = &r.faces.cycles[r.faces.outer];
    let x = *outer_cycle
        .iter()
        .find(|d| r.rot_corner[d.idx()] <= 0)
        .ok_or(RealizeError::Inconsistent)?;
    let v = g.head(x);
    let last = *chain_edges[x.edge()].last().unwrap();
    let wx = if x.is_forward() { Dart::new(last, false) } else { Dart::new(chain_edges[x.edge()][0], true) };
    let back_dir = w.dart_dir(wx.rev());
    let conn_dir = (back_dir + 1) % 4;
    let corners: Vec<usize> = (0..4).map(|_| w.add_vertex()).collect();
    let hit = w.add_vertex();
    // Box corners counter-clockwise: bottom-left, bottom-right, top-right, top-left.
    // Side i runs from corner i to corner i+1 with direction i (E, N, W, S).
    let side = match conn_dir {
        0 => 1,
        1 => 2,
        2 => 3,
        _ => 0,
    };
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        if i == side {
            w.add_edge(a, hit, i as u8);
            w.add_edge(hit, b, i as u8);
        } else {
            w.add_edge(a, b, i as u8);
        }
    }
    w.add_edge(v, hit, conn_dir);
    // Cut reflex corners until every inner face is a rectangle.
    loop {
        let slots = w.slots()?;
        let faces = w.faces(&slots);
        let mut did = false;
        for f in &faces {
            let k = f.len();
            let turns: Vec<i32> = (0..k).map(|i| w.turn(f[i], f[(i + 1) % k])).collect();
            let total: i32 = turns.iter().sum();
            if total != 4 {
                continue; // the outside of the box
            }
            let Some(i) = (0..k).find(|&i| turns[i] < 0) else { continue };
            let mut acc = 0;
            let mut j = i;
            loop {
                acc += turns[j % k];
                j += 1;
                if acc == 1 {
                    break;
                }
            }
            let xi = f[i];
            let xj = f[j % k];
            let p = w.head(xi);
            let ndir = w.dart_dir(xi);
            // Split the edge of xj at a new vertex.
            let e = xj.edge();
            let [a, b] = w.edges[e];
            let mid = w.add_vertex();
            w.edges[e] = [a, mid];
            let fd = w.dir[e];
            w.add_edge(mid, b, fd);
            w.add_edge(p, mid, ndir);
            did = true;
            break;
        }
        if !did {
            break;
        }
    }
    // Coordinates by longest paths over unions of collinear vertices.
    let coords = |horizontal: bool| -> Result<Vec<i64>, RealizeError> {
        let mut uf: Vec<usize> = (0..w.nv).collect();
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
        // x: vertical edges join classes; horizontal edges order them.
        for (e, &[a, b]) in w.edges.iter().enumerate() {
            let vertical = w.dir[e] % 2 == 1;
            if vertical == horizontal {
                let ra = find(&mut uf, a);
                let rb = find(&mut uf, b);
                uf[ra] = rb;
            }
        }
        let mut succ: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        let mut indeg = vec![0usize; w.nv];
        for (e, &[a, b]) in w.edges.iter().enumerate() {
            let d = w.dir[e];
            let along = if horizontal { d.is_multiple_of(2) } else { d % 2 == 1 };
            if !along {
                continue;
            }
            let positive = if horizontal { d == 0 } else { d == 1 };
            let (lo, hi) = if positive { (a, b) } else { (b, a) };
            let (lo, hi) = (find(&mut uf, lo), find(&mut uf, hi));
            if lo == hi {
                return Err(RealizeError::Inconsistent);
            }
            if succ.entry(lo).or_default().insert(hi) {
                indeg[hi] += 1;
            }
        }
        let mut val = vec![0i64; w.nv];
        let roots: Vec<usize> = (0..w.nv).filter(|&v| find(&mut uf, v) == v).collect();
        let mut queue: Vec<usize> = roots.iter().copied().filter(|&v| indeg[v] == 0).collect();
        let mut done = 0;
        while let Some(v) = queue.pop() {
            done += 1;
            if let Some(ss) = succ.get(&v) {
                for &s in ss {
                    val[s] = val[s].max(val[v] + 1);
                    indeg[s] -= 1;
                    if indeg[s] == 0 {
                        queue.push(s);
                    }
                }
            }
        }
        if done != roots.len() {
            return Err(RealizeError::Inconsistent);
        }
        Ok((0..w.nv).map(|v| val[find(&mut uf, v)]).collect())
    };
    let xs = coords(true)?;
    let ys = coords(false)?;
    let min_x = (0..g.n()).map(|v| xs[v]).chain(chain_nodes.iter().flatten().map(|&v| xs[v])).min().unwrap();
    let min_y = (0..g.n()).map(|v| ys[v]).chain(chain_nodes.iter().flatten().map(|&v| ys[v])).min().unwrap();
    let at = |v: usize| (xs[v] - min_x, ys[v] - min_y);
    Ok(GridDrawing {
        pos: (0..g.n()).map(at).collect(),
        paths: chain_nodes.iter().map(|ns| ns.iter().map(|&v| at(v)).collect()).collect(),
    })
}

/// Rotations read back from a drawing, in the layout of `OrthoRep`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extracted {
    pub rotation: Vec<Vec<Dart>>,
    pub rot_dart: Vec<i32>,
    pub rot_corner: Vec<i32>,
}

fn dir_of(a: (i64, i64), b: (i64, i64)) -> Option<u8> {
    match ((b.0 - a.0).signum(), (b.1 - a.1).signum()) {
        (1, 0) => Some(0),
        (0, 1) => Some(1),
        (-1, 0) => Some(2),
        (0, -1) => Some(3),
        _ => None,
    }
}

/// Reads rotations off a drawing of `g`; `None` if a segment is not axis-aligned.
pub fn extract(g: &crate::graph::Graph, dr: &GridDrawing) -> Option<Extracted> {
    // Collapse collinear interior points so only real bends remain.
    let path_dirs = |e: EdgeId| -> Option<Vec<u8>> {
        let p = &dr.paths[e];
        let mut ds = Vec::new();
        for s in p.windows(2) {
            let d = dir_of(s[0], s[1])?;
            if ds.last() != Some(&d) {
                ds.push(d);
            }
        }
        (!ds.is_empty()).then_some(ds)
    };
    let mut dirs = Vec::new();
    for e in 0..g.m() {
        dirs.push(path_dirs(e)?);
    }
    let leave = |d: Dart| -> u8 {
        let ds = &dirs[d.edge()];
        if d.is_forward() {
            ds[0]
        } else {
            (ds.last().unwrap() + 2) % 4
        }
    };
    let mut rot_dart = vec![0; 2 * g.m()];
    for e in 0..g.m() {
        let ds = &dirs[e];
        let mut r = 0;
        for p in ds.windows(2) {
            r += match (p[0] as i32 - p[1] as i32).rem_euclid(4) {
                1 => 1,
                3 => -1,
                _ => return None,
            };
        }
        rot_dart[2 * e] = r;
        rot_dart[2 * e + 1] = -r;
    }
    let mut rotation = Vec::new();
    let mut rot_corner = vec![0; 2 * g.m()];
    for v in 0..g.n() {
        let mut out: Vec<Dart> = g.out_darts(v).to_vec();
        out.sort_by_key(|&d| leave(d));
        let k = out.len();
        for i in 0..k {
            let a = out[i];
            let b = out[(i + 1) % k];
            let mut steps = (leave(b) as i32 - leave(a) as i32).rem_euclid(4);
            if steps == 0 {
                steps = 4;
            }
            rot_corner[a.rev().idx()] = 2 - steps;
        }
        rotation.push(out);
    }
    Some(Extracted { rotation, rot_dart, rot_corner })
}

/// True when the extracted rotations equal the representation's.
pub fn matches_rep(r: &OrthoRep, dr: &GridDrawing) -> bool {
    let Some(ex) = extract(&r.graph, dr) else { return false };
    if ex.rot_dart != r.rot_dart || ex.rot_corner != r.rot_corner {
        return false;
    }
    (0..r.graph.n()).all(|v| cyclic_eq(&ex.rotation[v], r.emb.rotation(v)))
}

fn cyclic_eq(a: &[Dart], b: &[Dart]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let Some(off) = b.iter().position(|&x| x == a[0]) else { return false };
    (0..a.len()).all(|i| a[i] == b[(off + i) % b.len()])
}

/// Number of pairs of segments that meet other than at a shared vertex or a
/// bend between consecutive segments of one edge.
pub fn crossings(g: &crate::graph::Graph, dr: &GridDrawing) -> usize {
    struct Seg {
        a: (i64, i64),
        b: (i64, i64),
        edge: usize,
        idx: usize,
        last: usize,
    }
    let mut segs = Vec::new();
    for (e, p) in dr.paths.iter().enumerate() {
        let n = p.len() - 1;
        for i in 0..n {
            segs.push(Seg { a: p[i], b: p[i + 1], edge: e, idx: i, last: n - 1 });
        }
    }
    let on = |p: (i64, i64), s: &Seg| {
        let (x0, x1) = (s.a.0.min(s.b.0), s.a.0.max(s.b.0));
        let (y0, y1) = (s.a.1.min(s.b.1), s.a.1.max(s.b.1));
        p.0 >= x0 && p.0 <= x1 && p.1 >= y0 && p.1 <= y1
    };
    let mut count = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (s, t) = (&segs[i], &segs[j]);
            // Intersection of two axis-aligned boxes.
            let ix0 = s.a.0.min(s.b.0).max(t.a.0.min(t.b.0));
            let ix1 = s.a.0.max(s.b.0).min(t.a.0.max(t.b.0));
            let iy0 = s.a.1.min(s.b.1).max(t.a.1.min(t.b.1));
            let iy1 = s.a.1.max(s.b.1).min(t.a.1.max(t.b.1));
            if ix0 > ix1 || iy0 > iy1 {
                continue;
            }
            if ix0 != ix1 || iy0 != iy1 {
                count += 1; // overlap along a line
                continue;
            }
            let p = (ix0, iy0);
            debug_assert!(on(p, s) && on(p, t));
            let end_of = |sg: &Seg| {
                let mut ends = Vec::new();
                if p == sg.a {
                    ends.push(if sg.idx == 0 { End::Vertex(g.endpoints(sg.edge).0) } else { End::Bend(sg.edge, sg.idx) });
                }
                if p == sg.b {
                    ends.push(if sg.idx == sg.last { End::Vertex(g.endpoints(sg.edge).1) } else { End::Bend(sg.edge, sg.idx + 1) });
                }
                ends
            };
            let es = end_of(s);
            let et = end_of(t);
            let shared = es.iter().any(|x| et.contains(x));
            if !shared {
                count += 1;
            }
        }
    }
    count
}

#[derive(PartialEq)]
enum End {
    Vertex(VertexId),
    Bend(usize, usize),
}

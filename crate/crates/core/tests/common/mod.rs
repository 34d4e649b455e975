//! Instance corpora shared by the integration tests.
#![allow(dead_code)]

use flexdraw::connectivity::is_biconnected;
use flexdraw::graph::Graph;
use flexdraw::model::{EdgeCost, Instance};
use flexdraw::planar::planar_embedding;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Connected simple planar graphs with maximum degree 4 on exactly `n`
/// vertices, one per isomorphism class.
pub fn graphs_up_to_iso(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 1 {
        return vec![Vec::new()];
    }
    let ps = pairs(n);
    let index = |a: usize, b: usize| ps.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let perms = permutations(n);
    let maps: Vec<Vec<usize>> = perms.iter().map(|p| ps.iter().map(|&(a, b)| index(p[a], p[b])).collect()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << ps.len()) {
        if (mask.count_ones() as usize) < n - 1 {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..ps.len()).filter(|&i| mask >> i & 1 == 1).map(|i| ps[i]).collect();
        let mut deg = vec![0; n];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        if deg.iter().any(|&d| d > 4) || !connected(n, &edges) {
            continue;
        }
        let canon = maps
            .iter()
            .map(|m| (0..ps.len()).filter(|&i| mask >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << m[i]))
            .min()
            .unwrap();
        if !seen.insert(canon) {
            continue;
        }
        if planar_embedding(&Graph::from_edges(n, &edges)).is_some() {
            out.push(edges);
        }
    }
    out
}

fn with_flex(n: usize, edges: &[(usize, usize)], flex: &[u32]) -> Instance {
    let g = Graph::from_edges(n, edges);
    Instance::new(g, flex.iter().map(|&f| EdgeCost::Flex(f)).collect())
}

/// Every graph with up to `max_n` vertices, with uniform flexibility 0, 1, 2
/// and one random mix.
pub fn exhaustive_flex(max_n: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for n in 1..=max_n {
        for edges in graphs_up_to_iso(n) {
            for f in 0..3 {
                out.push(with_flex(n, &edges, &vec![f; edges.len()]));
            }
            let mix: Vec<u32> = (0..edges.len()).map(|_| r.gen_range(0..3)).collect();
            out.push(with_flex(n, &edges, &mix));
        }
    }
    out
}

/// A random connected 4-planar multigraph: a random tree plus extra edges,
/// occasionally parallel.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize, extra: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut deg = vec![0; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    for i in 1..n {
        let cands: Vec<usize> = order[..i].iter().copied().filter(|&v| deg[v] < 4).collect();
        let p = cands[r.gen_range(0..cands.len())];
        let v = order[i];
        edges.push((p, v));
        deg[p] += 1;
        deg[v] += 1;
    }
    for _ in 0..extra * 4 {
        if edges.len() >= n - 1 + extra {
            break;
        }
        let a = r.gen_range(0..n);
        let b = r.gen_range(0..n);
        if a == b || deg[a] >= 4 || deg[b] >= 4 {
            continue;
        }
        let parallel = edges.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
        if parallel && r.gen_bool(0.8) {
            continue;
        }
        edges.push((a, b));
        if planar_embedding(&Graph::from_edges(n, &edges)).is_none() {
            edges.pop();
            continue;
        }
        deg[a] += 1;
        deg[b] += 1;
    }
    edges
}

/// Random instances with 7 or 8 vertices and flexibilities in {0, 1, 2}.
pub fn sampled_flex(count: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(7..=8);
            let extra = r.gen_range(0..=n);
            let edges = random_graph(&mut r, n, extra);
            let flex: Vec<u32> = (0..edges.len()).map(|_| r.gen_range(0..3)).collect();
            with_flex(n, &edges, &flex)
        })
        .collect()
}

/// A random non-decreasing cost table with 2 to 4 entries.
pub fn monotone_table(r: &mut ChaCha8Rng) -> EdgeCost {
    let len = r.gen_range(2..=4);
    let mut t = vec![0.0];
    for _ in 1..len {
        let step = [0.0, 1.0, 1.0, 2.0, 3.0][r.gen_range(0..5)];
        t.push(t.last().unwrap() + step);
    }
    if r.gen_bool(0.3) {
        let s = r.gen_range(0..3) as f64;
        for x in &mut t {
            *x += s;
        }
    }
    EdgeCost::Table(t)
}

pub fn with_tables(r: &mut ChaCha8Rng, n: usize, edges: &[(usize, usize)]) -> Instance {
    let g = Graph::from_edges(n, edges);
    let costs = (0..edges.len()).map(|_| monotone_table(r)).collect();
    Instance::new(g, costs)
}

/// Random graphs with up to `max_n` vertices and random monotone cost tables.
pub fn table_corpus(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(2..=max_n);
            let extra = r.gen_range(0..=n / 2 + 1);
            let edges = random_graph(&mut r, n, extra);
            with_tables(&mut r, n, &edges)
        })
        .collect()
}

/// Two random biconnected pieces glued at one vertex, with cost tables.
pub fn cutvertex_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let a = r.gen_range(2..=4);
        let b = r.gen_range(2..=4);
        let ea = biconnected_piece(&mut r, a);
        let eb = biconnected_piece(&mut r, b);
        let mut edges = ea.clone();
        edges.extend(eb.iter().map(|&(x, y)| (if x == 0 { 0 } else { x + a - 1 }, if y == 0 { 0 } else { y + a - 1 })));
        let n = a + b - 1;
        let g = Graph::from_edges(n, &edges);
        if (0..n).any(|v| g.degree(v) > 4) {
            continue;
        }
        out.push(with_tables(&mut r, n, &edges));
    }
    out
}

/// A cycle on `n` vertices (a digon for 2) with a few random chords.
fn biconnected_piece(r: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    if n > 3 && r.gen_bool(0.5) {
        e.push((0, 2));
    }
    e
}

/// `rows × cols` grid with a fraction of edges removed while it stays
/// biconnected; flexibility 1 everywhere.
pub fn thinned_grid(rows: usize, cols: usize, drop: f64, seed: u64) -> Instance {
    let mut r = rng(seed);
    let id = |i: usize, j: usize| i * cols + j;
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push((id(i, j), id(i, j + 1)));
            }
            if i + 1 < rows {
                edges.push((id(i, j), id(i + 1, j)));
            }
        }
    }
    let n = rows * cols;
    let target = (edges.len() as f64 * drop) as usize;
    let mut removed = 0;
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut r);
    let mut alive = vec![true; edges.len()];
    for k in order {
        if removed >= target {
            break;
        }
        alive[k] = false;
        let es: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| alive[i]).map(|i| edges[i]).collect();
        if is_biconnected(&Graph::from_edges(n, &es)) {
            removed += 1;
        } else {
            alive[k] = true;
        }
    }
    let es: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| alive[i]).map(|i| edges[i]).collect();
    Instance::from_edges(n, &es, 1)
}

/// Instances that are st-graphs with their poles recorded: for each graph of
/// the corpus and each edge, the graph without that edge, poles at its ends.
pub fn st_graphs(insts: &[Instance]) -> Vec<Instance> {
    let mut out = Vec::new();
    for inst in insts {
        let g = &inst.graph;
        if g.m() < 2 || !is_biconnected(g) {
            continue;
        }
        for e in 0..g.m() {
            let (s, t) = g.endpoints(e);
            let mut h = Graph::new(g.n());
            let mut costs = Vec::new();
            for f in (0..g.m()).filter(|&f| f != e) {
                let (a, b) = g.endpoints(f);
                h.add_edge(a, b);
                costs.push(inst.costs[f].clone());
            }
            let mut x = Instance::new(h, costs);
            x.poles = Some((s, t));
            out.push(x);
        }
    }
    out
}

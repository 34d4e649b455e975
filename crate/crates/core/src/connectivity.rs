//! Blocks and articulation points (iterative Hopcroft–Tarjan).

use crate::graph::{EdgeId, Graph, VertexId};

/// Biconnected components as edge lists, plus the articulation flag per vertex.
/// Vertices listed in `skip` are treated as deleted.
pub fn blocks_masked(g: &Graph, skip: &[bool]) -> (Vec<Vec<EdgeId>>, Vec<bool>) {
    let n = g.n();
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut cut = vec![false; n];
    let mut blocks = Vec::new();
    let mut estack: Vec<EdgeId> = Vec::new();
    let mut time = 0u32;
    // (vertex, edge used to enter, next incidence index)
    let mut stack: Vec<(VertexId, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != u32::MAX || skip[root] {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (v, pe, ref mut i)) = stack.last_mut() {
            let out = g.out_darts(v);
            if *i < out.len() {
                let d = out[*i];
                *i += 1;
                let e = d.edge();
                let w = g.head(d);
                if e == pe || skip[w] || w == v {
                    continue;
                }
                if disc[w] == u32::MAX {
                    estack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    estack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        if p != root {
                            cut[p] = true;
                        }
                        let mut b = Vec::new();
                        while let Some(e) = estack.pop() {
                            b.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        b.sort_unstable();
                        blocks.push(b);
                    }
                }
            }
        }
        if root_children > 1 {
            cut[root] = true;
        }
    }
    (blocks, cut)
}

pub fn blocks(g: &Graph) -> (Vec<Vec<EdgeId>>, Vec<bool>) {
    blocks_masked(g, &vec![false; g.n()])
}

/// True for connected graphs without cut vertices and at least one edge.
pub fn is_biconnected(g: &Graph) -> bool {
    if g.m() == 0 || !g.is_connected() {
        return false;
    }
    let (b, _) = blocks(g);
    b.len() == 1 && (0..g.n()).all(|v| g.degree(v) > 0)
}

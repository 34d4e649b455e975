//! Block-cut trees.

use crate::connectivity::blocks;
use crate::graph::{EdgeId, Graph, VertexId};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcTree {
    pub blocks: Vec<Vec<EdgeId>>,
    /// Vertices of each block, sorted.
    pub block_vertices: Vec<Vec<VertexId>>,
    pub cutvertices: Vec<VertexId>,
    /// Blocks containing each vertex.
    pub blocks_at: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BcError {
    #[error("graph is not connected")]
    Disconnected,
}

pub fn build_bc(g: &Graph) -> Result<BcTree, BcError> {
    if !g.is_connected() {
        return Err(BcError::Disconnected);
    }
    let (bl, cut) = blocks(g);
    let mut block_vertices = Vec::new();
    let mut blocks_at = vec![Vec::new(); g.n()];
    for (i, b) in bl.iter().enumerate() {
        let mut vs: Vec<VertexId> = b.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
        vs.sort_unstable();
        vs.dedup();
        for &v in &vs {
            blocks_at[v].push(i);
        }
        block_vertices.push(vs);
    }
    let cutvertices = (0..g.n()).filter(|&v| cut[v]).collect();
    Ok(BcTree { blocks: bl, block_vertices, cutvertices, blocks_at })
}

impl BcTree {
    pub fn is_cut(&self, v: VertexId) -> bool {
        self.blocks_at[v].len() > 1
    }

    /// Degree of `v` inside block `b`.
    pub fn degree_in(&self, g: &Graph, b: usize, v: VertexId) -> usize {
        self.blocks[b].iter().filter(|&&e| g.endpoints(e).0 == v || g.endpoints(e).1 == v).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let t = build_bc(&tri).unwrap();
        assert_eq!((t.blocks.len(), t.cutvertices.len()), (1, 0));
        let bow = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let t = build_bc(&bow).unwrap();
        assert_eq!((t.blocks.len(), t.cutvertices.clone()), (2, vec![2]));
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let t = build_bc(&path).unwrap();
        assert_eq!((t.blocks.len(), t.cutvertices.clone()), (2, vec![1]));
        assert!(build_bc(&Graph::from_edges(4, &[(0, 1), (2, 3)])).is_err());
    }
}

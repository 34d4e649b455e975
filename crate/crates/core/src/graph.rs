//! Multigraphs with dart-based incidence.
//!
//! Edge `e` owns two darts: `2e` runs from `edges[e][0]` to `edges[e][1]`,
//! `2e + 1` runs back. Darts are the unit every embedding, face and rotation
//! table in this crate is keyed by.

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Dart(pub u32);

impl Dart {
    #[inline]
    pub fn new(e: EdgeId, backward: bool) -> Dart {
        Dart((e as u32) << 1 | backward as u32)
    }
    #[inline]
    pub fn edge(self) -> EdgeId {
        (self.0 >> 1) as usize
    }
    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }
    #[inline]
    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<[VertexId; 2]>,
    out: Vec<Vec<Dart>>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph { n, edges: Vec::new(), out: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Graph {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.n += 1;
        self.out.push(Vec::new());
        self.n - 1
    }

    /// Adds edge `u -> v` and returns its id. Panics on unknown endpoints.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        assert!(u < self.n && v < self.n, "edge endpoint out of range");
        let e = self.edges.len();
        self.edges.push([u, v]);
        self.out[u].push(Dart::new(e, false));
        self.out[v].push(Dart::new(e, true));
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.edges.len()
    }
    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.edges[e][0], self.edges[e][1])
    }
    #[inline]
    pub fn tail(&self, d: Dart) -> VertexId {
        self.edges[d.edge()][(!d.is_forward()) as usize]
    }
    #[inline]
    pub fn head(&self, d: Dart) -> VertexId {
        self.edges[d.edge()][d.is_forward() as usize]
    }
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }
    /// Darts leaving `v`, in insertion order.
    pub fn out_darts(&self, v: VertexId) -> &[Dart] {
        &self.out[v]
    }
    pub fn degree(&self, v: VertexId) -> usize {
        self.out[v].len()
    }
    pub fn max_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }
    pub fn dart_from(&self, e: EdgeId, v: VertexId) -> Dart {
        Dart::new(e, self.edges[e][0] != v)
    }
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[v].iter().map(move |&d| self.head(d))
    }
    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(|[a, b]| a == b)
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut c = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = c;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            c += 1;
        }
        (comp, c)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().1 == 1
    }

    /// Breadth-first distances from `s` (usize::MAX when unreachable).
    pub fn bfs(&self, s: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[s] = 0;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// Subgraph on the given edges with the same vertex set.
    pub fn edge_subgraph(&self, keep: &[EdgeId]) -> Graph {
        let mut g = Graph::new(self.n);
        for &e in keep {
            let (u, v) = self.endpoints(e);
            g.add_edge(u, v);
        }
        g
    }
}

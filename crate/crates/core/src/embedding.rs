//! Rotation systems and face traversal.
//!
//! The rotation at a vertex lists its outgoing darts counter-clockwise in a
//! y-up frame, which reads clockwise on screen where y grows downward. Faces
//! are traced with the face on the right of each dart: the successor of `d`
//! is the rotation successor of `rev(d)` at `head(d)`. Inner faces then run
//! clockwise, the outer face counter-clockwise.

use crate::graph::{Dart, EdgeId, Graph, VertexId};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum EmbeddingError {
    #[error("vertex {0}: rotation does not list exactly its incident darts")]
    BadRotation(VertexId),
    #[error("outer dart {0} out of range")]
    BadOuter(u32),
    #[error("rotation system is not planar (Euler check failed)")]
    NotPlanar,
    #[error("graph is disconnected")]
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    rot: Vec<Vec<Dart>>,
    pos: Vec<u32>,
    /// A dart whose right face is the outer face.
    outer: Option<Dart>,
}

impl RotationSystem {
    pub fn new(g: &Graph, rot: Vec<Vec<Dart>>, outer: Option<Dart>) -> Result<Self, EmbeddingError> {
        if rot.len() != g.n() {
            return Err(EmbeddingError::BadRotation(rot.len().min(g.n())));
        }
        let mut pos = vec![u32::MAX; 2 * g.m()];
        for (v, list) in rot.iter().enumerate() {
            if list.len() != g.degree(v) {
                return Err(EmbeddingError::BadRotation(v));
            }
            for (i, &d) in list.iter().enumerate() {
                if d.idx() >= pos.len() || g.tail(d) != v || pos[d.idx()] != u32::MAX {
                    return Err(EmbeddingError::BadRotation(v));
                }
                pos[d.idx()] = i as u32;
            }
        }
        if let Some(o) = outer {
            if o.idx() >= pos.len() {
                return Err(EmbeddingError::BadOuter(o.0));
            }
        }
        let outer = outer.or_else(|| (g.m() > 0).then_some(Dart(0)));
        Ok(RotationSystem { rot, pos, outer })
    }

    /// Builds from per-vertex edge id lists; parallel edges are told apart by id.
    pub fn from_edge_lists(
        g: &Graph,
        lists: &[Vec<EdgeId>],
        outer: Option<Dart>,
    ) -> Result<Self, EmbeddingError> {
        let mut rot = Vec::with_capacity(lists.len());
        for (v, l) in lists.iter().enumerate() {
            let mut r = Vec::with_capacity(l.len());
            for &e in l {
                if e >= g.m() {
                    return Err(EmbeddingError::BadRotation(v));
                }
                let (a, b) = g.endpoints(e);
                if a != v && b != v {
                    return Err(EmbeddingError::BadRotation(v));
                }
                r.push(g.dart_from(e, v));
            }
            rot.push(r);
        }
        RotationSystem::new(g, rot, outer)
    }

    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        &self.rot[v]
    }
    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rot
    }
    pub fn outer_dart(&self) -> Option<Dart> {
        self.outer
    }
    pub fn with_outer(&self, d: Dart) -> RotationSystem {
        RotationSystem { outer: Some(d), ..self.clone() }
    }

    /// Next dart after `d` around `tail(d)`.
    #[inline]
    pub fn succ(&self, g: &Graph, d: Dart) -> Dart {
        let list = &self.rot[g.tail(d)];
        let i = self.pos[d.idx()] as usize + 1;
        list[if i == list.len() { 0 } else { i }]
    }
    #[inline]
    pub fn pred(&self, g: &Graph, d: Dart) -> Dart {
        let list = &self.rot[g.tail(d)];
        let i = self.pos[d.idx()] as usize;
        list[if i == 0 { list.len() - 1 } else { i - 1 }]
    }
    /// Successor of `d` on the face to its right.
    #[inline]
    pub fn next_in_face(&self, g: &Graph, d: Dart) -> Dart {
        self.succ(g, d.rev())
    }

    /// Reflection: reversed rotations, same faces traced backwards.
    pub fn mirror(&self, g: &Graph) -> RotationSystem {
        let rot: Vec<Vec<Dart>> = self.rot.iter().map(|l| l.iter().rev().copied().collect()).collect();
        RotationSystem::new(g, rot, self.outer.map(Dart::rev)).expect("mirror of a valid rotation system")
    }

    pub fn faces(&self, g: &Graph) -> Faces {
        Faces::trace(g, self)
    }

    /// Checks Euler's formula on every component with edges.
    pub fn check_planar(&self, g: &Graph) -> Result<Faces, EmbeddingError> {
        let f = self.faces(g);
        let (comp, nc) = g.components();
        let mut nv = vec![0i64; nc];
        let mut ne = vec![0i64; nc];
        let mut nf = vec![0i64; nc];
        for v in 0..g.n() {
            nv[comp[v]] += 1;
        }
        for e in 0..g.m() {
            ne[comp[g.endpoints(e).0]] += 1;
        }
        for c in &f.cycles {
            if let Some(d) = c.first() {
                nf[comp[g.tail(*d)]] += 1;
            }
        }
        for c in 0..nc {
            if ne[c] > 0 && nv[c] - ne[c] + nf[c] != 2 {
                return Err(EmbeddingError::NotPlanar);
            }
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faces {
    /// Face index of the face to the right of each dart.
    pub face_of: Vec<usize>,
    /// Darts of each face in traversal order.
    pub cycles: Vec<Vec<Dart>>,
    pub outer: usize,
}

impl Faces {
    fn trace(g: &Graph, rs: &RotationSystem) -> Faces {
        let nd = 2 * g.m();
        let mut face_of = vec![usize::MAX; nd];
        let mut cycles = Vec::new();
        for start in 0..nd {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = cycles.len();
            let mut cyc = Vec::new();
            let mut d = Dart(start as u32);
            while face_of[d.idx()] == usize::MAX {
                face_of[d.idx()] = f;
                cyc.push(d);
                d = rs.next_in_face(g, d);
            }
            cycles.push(cyc);
        }
        if cycles.is_empty() {
            cycles.push(Vec::new());
        }
        let outer = rs.outer.map_or(0, |o| face_of[o.idx()]);
        Faces { face_of, cycles, outer }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
    pub fn face(&self, d: Dart) -> usize {
        self.face_of[d.idx()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn naive(g: &Graph) -> RotationSystem {
        let rot = (0..g.n()).map(|v| g.out_darts(v).to_vec()).collect();
        RotationSystem::new(g, rot, None).unwrap()
    }

    #[test]
    fn square_has_two_faces_of_length_four() {
        let g = cycle(4);
        let f = naive(&g).check_planar(&g).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.cycles.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn digon_faces() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let f = naive(&g).check_planar(&g).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.cycles.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn k4_planar_rotation() {
        // Vertex 3 in the middle of triangle 0,1,2 (counter-clockwise).
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]);
        let lists = vec![vec![0, 3, 2], vec![1, 4, 0], vec![2, 5, 1], vec![3, 4, 5]];
        let rs = RotationSystem::from_edge_lists(&g, &lists, None).unwrap();
        let f = rs.check_planar(&g).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.cycles.iter().all(|c| c.len() == 3));
        let m = rs.mirror(&g);
        assert_eq!(m.check_planar(&g).unwrap().len(), 4);
    }

    #[test]
    fn nonplanar_rotation_rejected() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]);
        let lists = vec![vec![0, 2, 3], vec![1, 4, 0], vec![2, 5, 1], vec![3, 4, 5]];
        let rs = RotationSystem::from_edge_lists(&g, &lists, None).unwrap();
        assert_eq!(rs.check_planar(&g), Err(EmbeddingError::NotPlanar));
    }

    #[test]
    fn rejects_inconsistent() {
        let g = cycle(3);
        let bad = vec![vec![Dart(0)], vec![Dart(2), Dart(1)], vec![Dart(4), Dart(3)]];
        assert!(RotationSystem::new(&g, bad, None).is_err());
    }
}

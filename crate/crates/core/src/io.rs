//! JSON instance files and an edge-list import shim.
//!
//! Rotations in a file are clockwise on screen (y grows downward), which is
//! the order [`RotationSystem`] stores. The outer face is named by an edge
//! walked from one endpoint; the face on its right is outer.

use crate::embedding::RotationSystem;
use crate::graph::{Graph, VertexId};
use crate::model::{EdgeCost, Instance};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Poles>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restrict_90: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: String,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flex: Option<u32>,
    /// Cost per bend count; `null` is infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<Option<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Poles {
    pub s: String,
    pub t: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingEntry {
    pub rotation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<OuterFace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterFace {
    pub edge: String,
    pub from: String,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate {0} id {1:?}")]
    Duplicate(&'static str, String),
    #[error("unknown {0} id {1:?}")]
    Unknown(&'static str, String),
    #[error("edge {0:?} needs exactly one of flex and costs")]
    Cost(String),
    #[error("embedding: {0}")]
    Embedding(String),
    #[error("line {0}: {1}")]
    Line(usize, String),
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> InstanceFile {
        let g = &inst.graph;
        let vn = &inst.vertex_names;
        let edges = (0..g.m())
            .map(|e| {
                let (a, b) = g.endpoints(e);
                let (flex, costs) = match &inst.costs[e] {
                    EdgeCost::Flex(k) => (Some(*k), None),
                    EdgeCost::Table(t) => (None, Some(t.iter().map(|c| c.is_finite().then_some(*c)).collect())),
                };
                EdgeEntry { id: inst.edge_names[e].clone(), source: vn[a].clone(), target: vn[b].clone(), flex, costs }
            })
            .collect();
        let embedding = inst.embedding.as_ref().map(|emb| EmbeddingEntry {
            rotation: (0..g.n())
                .map(|v| (vn[v].clone(), emb.rotation(v).iter().map(|d| inst.edge_names[d.edge()].clone()).collect()))
                .collect(),
            outer_face: emb.outer_dart().map(|d| OuterFace { edge: inst.edge_names[d.edge()].clone(), from: vn[g.tail(d)].clone() }),
        });
        InstanceFile {
            vertices: vn.clone(),
            edges,
            poles: inst.poles.map(|(s, t)| Poles { s: vn[s].clone(), t: vn[t].clone() }),
            embedding,
            restrict_90: inst.restrict_90.iter().map(|&v| vn[v].clone()).collect(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, IoError> {
        let mut vid: HashMap<&str, VertexId> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vid.insert(v, i).is_some() {
                return Err(IoError::Duplicate("vertex", v.clone()));
            }
        }
        let vert = |s: &str| vid.get(s).copied().ok_or_else(|| IoError::Unknown("vertex", s.to_string()));
        let mut g = Graph::new(self.vertices.len());
        let mut costs = Vec::with_capacity(self.edges.len());
        let mut eid: HashMap<&str, usize> = HashMap::new();
        for e in &self.edges {
            let id = g.add_edge(vert(&e.source)?, vert(&e.target)?);
            if eid.insert(&e.id, id).is_some() {
                return Err(IoError::Duplicate("edge", e.id.clone()));
            }
            costs.push(match (&e.flex, &e.costs) {
                (Some(k), None) => EdgeCost::Flex(*k),
                (None, Some(t)) => EdgeCost::Table(t.iter().map(|c| c.unwrap_or(f64::INFINITY)).collect()),
                _ => return Err(IoError::Cost(e.id.clone())),
            });
        }
        let mut inst = Instance::new(g, costs);
        inst.vertex_names = self.vertices.clone();
        inst.edge_names = self.edges.iter().map(|e| e.id.clone()).collect();
        if let Some(p) = &self.poles {
            inst.poles = Some((vert(&p.s)?, vert(&p.t)?));
        }
        inst.restrict_90 = self.restrict_90.iter().map(|v| vert(v)).collect::<Result<BTreeSet<_>, _>>()?;
        if let Some(emb) = &self.embedding {
            let g = &inst.graph;
            let mut lists = vec![Vec::new(); g.n()];
            for (v, es) in &emb.rotation {
                lists[vert(v)?] = es
                    .iter()
                    .map(|e| eid.get(e.as_str()).copied().ok_or_else(|| IoError::Unknown("edge", e.clone())))
                    .collect::<Result<_, _>>()?;
            }
            let outer = match &emb.outer_face {
                None => None,
                Some(o) => {
                    let e = *eid.get(o.edge.as_str()).ok_or_else(|| IoError::Unknown("edge", o.edge.clone()))?;
                    let v = vert(&o.from)?;
                    let (a, b) = g.endpoints(e);
                    if v != a && v != b {
                        return Err(IoError::Embedding(format!("{} is not an endpoint of {}", o.from, o.edge)));
                    }
                    Some(g.dart_from(e, v))
                }
            };
            let rs = RotationSystem::from_edge_lists(g, &lists, outer).map_err(|e| IoError::Embedding(e.to_string()))?;
            inst.embedding = Some(rs);
        }
        Ok(inst)
    }
}

pub fn parse_instance(json: &str) -> Result<Instance, IoError> {
    let f: InstanceFile = serde_json::from_str(json)?;
    f.to_instance()
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("instance files always serialize")
}

/// Reads `u v [flex]` lines; `#` starts a comment. Vertices are named by
/// their tokens in order of appearance.
pub fn parse_edge_list(text: &str, default_flex: u32) -> Result<Instance, IoError> {
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() < 2 || tok.len() > 3 {
            return Err(IoError::Line(i + 1, "expected `u v [flex]`".into()));
        }
        let flex = match tok.get(2) {
            Some(f) => f.parse().map_err(|_| IoError::Line(i + 1, format!("bad flexibility {f:?}")))?,
            None => default_flex,
        };
        let mut id = |s: &str| {
            *ids.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                names.len() - 1
            })
        };
        let (a, b) = (id(tok[0]), id(tok[1]));
        edges.push((a, b, flex));
    }
    let mut g = Graph::new(names.len());
    for &(a, b, _) in &edges {
        g.add_edge(a, b);
    }
    let mut inst = Instance::new(g, edges.iter().map(|e| EdgeCost::Flex(e.2)).collect());
    inst.vertex_names = names;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::planar_embedding;

    #[test]
    fn round_trip_with_embedding_and_tables() {
        let mut inst = Instance::from_edges(3, &[(0, 1), (1, 2), (2, 0), (0, 1)], 1);
        inst.costs[1] = EdgeCost::Table(vec![0.0, 2.0, f64::INFINITY]);
        inst.poles = Some((0, 1));
        inst.restrict_90.insert(2);
        let emb = planar_embedding(&inst.graph).unwrap();
        inst.embedding = Some(emb.with_outer(emb.rotation(2)[0]));
        let json = instance_to_json(&inst);
        assert_eq!(parse_instance(&json).unwrap(), inst);
        assert_eq!(instance_to_json(&parse_instance(&json).unwrap()), json);
    }

    #[test]
    fn rejects_bad_files() {
        let e = r#"{"vertices":["a","a"],"edges":[]}"#;
        assert!(matches!(parse_instance(e), Err(IoError::Duplicate(..))));
        let e = r#"{"vertices":["a","b"],"edges":[{"id":"e","source":"a","target":"c","flex":1}]}"#;
        assert!(matches!(parse_instance(e), Err(IoError::Unknown(..))));
        let e = r#"{"vertices":["a","b"],"edges":[{"id":"e","source":"a","target":"b"}]}"#;
        assert!(matches!(parse_instance(e), Err(IoError::Cost(..))));
        assert!(matches!(parse_instance("{"), Err(IoError::Json(..))));
    }

    #[test]
    fn edge_list_shim() {
        let inst = parse_edge_list("# square\na b\nb c 2\nc d\nd a 0\n", 1).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.costs, vec![EdgeCost::Flex(1), EdgeCost::Flex(2), EdgeCost::Flex(1), EdgeCost::Flex(0)]);
        assert!(parse_edge_list("a", 1).is_err());
    }
}

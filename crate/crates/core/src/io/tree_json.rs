use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reeb::{OriginFiber, ReebTree, ReebVertex, VertexKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub x: f64,
    pub kind: VertexKind,
    pub preorder_class: usize,
}

/// Language-neutral tree: enough to recompute the canonical code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    /// Vertex id (as a string key) to incident edge indices, counterclockwise.
    pub embedding: BTreeMap<String, Vec<usize>>,
    pub root: Option<usize>,
}

pub fn tree_to_json(tree: &ReebTree) -> TreeJson {
    TreeJson {
        vertices: tree
            .vertices
            .iter()
            .map(|v| VertexJson { id: v.id, x: v.x, kind: v.kind, preorder_class: v.preorder_class })
            .collect(),
        edges: tree.edges.iter().map(|&(a, b)| [a, b]).collect(),
        embedding: tree.embedding.iter().enumerate().map(|(v, es)| (v.to_string(), es.clone())).collect(),
        root: tree.root_id,
    }
}

/// Rebuilds a tree; classes are taken as stored. Fiber representatives
/// and bands are not part of the schema and come back empty.
pub fn tree_from_json(json: &TreeJson) -> Result<ReebTree> {
    let n = json.vertices.len();
    let bad = |m: String| Err(Error::InvalidArgument(format!("tree json: {m}")));
    for (k, v) in json.vertices.iter().enumerate() {
        if v.id != k {
            return bad(format!("vertex at position {k} has id {}", v.id));
        }
    }
    if let Some(&[a, b]) = json.edges.iter().find(|e| e[0] >= n || e[1] >= n) {
        return bad(format!("edge ({a}, {b}) names a missing vertex"));
    }
    let mut embedding = vec![Vec::new(); n];
    for (key, es) in &json.embedding {
        let v: usize = match key.parse() {
            Ok(v) if v < n => v,
            _ => return bad(format!("embedding key {key:?} is not a vertex id")),
        };
        if let Some(e) = es.iter().find(|&&e| e >= json.edges.len()) {
            return bad(format!("embedding of {v} names missing edge {e}"));
        }
        embedding[v] = es.clone();
    }
    if json.root.is_some_and(|r| r >= n) {
        return bad("root is not a vertex id".into());
    }
    Ok(ReebTree {
        vertices: json
            .vertices
            .iter()
            .map(|v| ReebVertex { id: v.id, x: v.x, y_repr: 0.0, kind: v.kind, preorder_class: v.preorder_class })
            .collect(),
        edges: json.edges.iter().map(|e| (e[0], e[1])).collect(),
        embedding,
        root_id: json.root,
        bands: Vec::new(),
        origin: json.root.map(OriginFiber::Vertex),
        tau: 0.0,
    })
}

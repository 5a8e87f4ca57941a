//! Poincaré-Reeb trees: construction by a vertical sweep, rooting at the
//! origin's fiber, structural validation and canonical encoding.

mod build;
mod code;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::trace::LevelCurve;

pub use build::{build_reeb, column_fiber};
pub use code::{canonical_code, CodeOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Leaf,
    Internal,
    OddFlagged,
    Root,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReebVertex {
    pub id: usize,
    pub x: f64,
    /// Midpoint of the contracted fiber segment; drawing aid only.
    pub y_repr: f64,
    pub kind: VertexKind,
    pub preorder_class: usize,
}

/// Edges crossing the open strip `x_lo < x < x_hi`, bottom to top.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub x_lo: f64,
    pub x_hi: f64,
    pub edges: Vec<usize>,
}

/// Where the origin's fiber sits in the tree before rooting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginFiber {
    Vertex(usize),
    /// Edge index and the midpoint of the origin's fiber segment.
    Edge(usize, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReebTree {
    pub vertices: Vec<ReebVertex>,
    /// `(left, right)` endpoint ids.
    pub edges: Vec<(usize, usize)>,
    /// Per vertex: incident edge indices counterclockwise, starting from the
    /// topmost edge on the left (left edges top to bottom, then right edges
    /// bottom to top).
    pub embedding: Vec<Vec<usize>>,
    pub root_id: Option<usize>,
    pub bands: Vec<Band>,
    pub origin: Option<OriginFiber>,
    /// Absolute preorder tie tolerance used for the classes.
    pub tau: f64,
}

impl ReebTree {
    pub fn degree(&self, v: usize) -> usize {
        self.embedding[v].len()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.degree(v) == 1 && Some(v) != self.root_id).collect()
    }

    /// Number of edges over the vertical line at `x` (zero outside the
    /// sweep range and on critical abscissas).
    pub fn band_count_at(&self, x: f64) -> Option<usize> {
        self.bands.iter().find(|b| b.x_lo < x && x < b.x_hi).map(|b| b.edges.len())
    }

    /// Ranks of `x` with ties under `tau` (chained): class 0 is leftmost.
    pub fn assign_preorder(&mut self) {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].x.total_cmp(&self.vertices[b].x));
        let mut class = 0;
        for (k, &v) in order.iter().enumerate() {
            if k > 0 && self.vertices[v].x - self.vertices[order[k - 1]].x > self.tau {
                class += 1;
            }
            self.vertices[v].preorder_class = class;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub euler_characteristic: i64,
    pub connected: bool,
    pub acyclic: bool,
    /// Every edge joins two distinct preorder classes.
    pub transverse: bool,
    /// Per-vertex embeddings list exactly the incident edges.
    pub embedding_consistent: bool,
    /// Band stacking orders never invert and agree with the embeddings.
    pub planar: bool,
    pub passed: bool,
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

pub fn validate_tree(tree: &ReebTree) -> ValidationReport {
    let n = tree.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut acyclic = true;
    let mut endpoints_ok = true;
    for &(a, b) in &tree.edges {
        if a >= n || b >= n || a == b {
            endpoints_ok = false;
            acyclic = false;
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            acyclic = false;
        } else {
            parent[ra] = rb;
        }
    }
    let connected = n > 0 && endpoints_ok && (0..n).map(|v| find(&mut parent, v)).collect::<std::collections::HashSet<_>>().len() == 1;
    let transverse = endpoints_ok
        && tree.edges.iter().all(|&(a, b)| tree.vertices[a].preorder_class != tree.vertices[b].preorder_class);

    let mut embedding_consistent = tree.embedding.len() == n && endpoints_ok;
    if embedding_consistent {
        for v in 0..n {
            let mut listed = tree.embedding[v].clone();
            listed.sort_unstable();
            let mut incident: Vec<usize> =
                (0..tree.edges.len()).filter(|&e| tree.edges[e].0 == v || tree.edges[e].1 == v).collect();
            incident.sort_unstable();
            if listed != incident {
                embedding_consistent = false;
            }
        }
    }
    let planar = embedding_consistent && bands_planar(tree);
    let euler_characteristic = n as i64 - tree.edges.len() as i64;
    ValidationReport {
        vertex_count: n,
        edge_count: tree.edges.len(),
        euler_characteristic,
        connected,
        acyclic,
        transverse,
        embedding_consistent,
        planar,
        passed: connected && acyclic && euler_characteristic == 1 && transverse && embedding_consistent && planar,
    }
}

/// Two edges sharing several bands keep their relative order in all of
/// them, and at each vertex the left (right) edges sit contiguously in the
/// adjacent band in the order the embedding gives.
fn bands_planar(tree: &ReebTree) -> bool {
    use std::collections::HashMap;
    let mut seen: HashMap<(usize, usize), bool> = HashMap::new();
    for band in &tree.bands {
        for i in 0..band.edges.len() {
            for j in i + 1..band.edges.len() {
                let (a, b) = (band.edges[i], band.edges[j]);
                let key = (a.min(b), a.max(b));
                let below = a < b;
                if let Some(prev) = seen.insert(key, below) {
                    if prev != below {
                        return false;
                    }
                }
            }
        }
    }
    for (v, emb) in tree.embedding.iter().enumerate() {
        let x = tree.vertices[v].x;
        let left: Vec<usize> = emb.iter().copied().filter(|&e| tree.edges[e].1 == v).collect();
        let right: Vec<usize> = emb.iter().copied().filter(|&e| tree.edges[e].0 == v).collect();
        // embedding lists left edges first, then right edges
        if emb.iter().position(|&e| tree.edges[e].0 == v).map_or(false, |p| p < left.len()) {
            return false;
        }
        let band_left = tree.bands.iter().filter(|b| b.x_hi <= x + tree.tau).max_by(|a, b| a.x_hi.total_cmp(&b.x_hi));
        let band_right = tree.bands.iter().filter(|b| b.x_lo >= x - tree.tau).min_by(|a, b| a.x_lo.total_cmp(&b.x_lo));
        let mut want_left = left.clone();
        want_left.reverse();
        if !left.is_empty() && band_left.is_some_and(|b| !contiguous(&b.edges, &want_left)) {
            return false;
        }
        if !right.is_empty() && band_right.is_some_and(|b| !contiguous(&b.edges, &right)) {
            return false;
        }
    }
    true
}

fn contiguous(stack: &[usize], run: &[usize]) -> bool {
    stack.windows(run.len()).any(|w| w == run)
}

/// Marks the root at the origin's fiber, subdividing its edge when the
/// origin is not on a critical fiber. Classes are recomputed.
pub fn root_tree(tree: &ReebTree, curve: &LevelCurve) -> Result<ReebTree> {
    if geometry::winding_number(&curve.points, (0.0, 0.0)) == 0 {
        return Err(Error::NoComponentAroundOrigin(curve.epsilon));
    }
    let mut t = tree.clone();
    if t.root_id.is_some() {
        return Ok(t);
    }
    match t.origin {
        None => return Err(Error::Unrooted),
        Some(OriginFiber::Vertex(v)) => {
            t.vertices[v].kind = VertexKind::Root;
            t.root_id = Some(v);
        }
        Some(OriginFiber::Edge(e, y)) => {
            let r = t.vertices.len();
            t.vertices.push(ReebVertex { id: r, x: 0.0, y_repr: y, kind: VertexKind::Root, preorder_class: 0 });
            let (a, b) = t.edges[e];
            let e2 = t.edges.len();
            t.edges[e] = (a, r);
            t.edges.push((r, b));
            for slot in t.embedding[b].iter_mut() {
                if *slot == e {
                    *slot = e2;
                }
            }
            t.embedding.push(vec![e, e2]);
            let mut bands = Vec::with_capacity(t.bands.len() + 1);
            for band in t.bands.drain(..) {
                if band.x_lo < 0.0 && 0.0 < band.x_hi {
                    let right: Vec<usize> = band.edges.iter().map(|&k| if k == e { e2 } else { k }).collect();
                    bands.push(Band { x_lo: band.x_lo, x_hi: 0.0, edges: band.edges });
                    bands.push(Band { x_lo: 0.0, x_hi: band.x_hi, edges: right });
                } else if band.x_lo >= 0.0 {
                    let edges = band.edges.iter().map(|&k| if k == e { e2 } else { k }).collect();
                    bands.push(Band { edges, ..band });
                } else {
                    bands.push(band);
                }
            }
            t.bands = bands;
            t.root_id = Some(r);
            t.origin = Some(OriginFiber::Vertex(r));
        }
    }
    t.assign_preorder();
    Ok(t)
}

/// Root-to-leaf paths as vertex lists.
pub fn geodesics(tree: &ReebTree) -> Result<Vec<Vec<usize>>> {
    let root = tree.root_id.ok_or(Error::Unrooted)?;
    let mut out = Vec::new();
    let mut stack = vec![(root, usize::MAX, vec![root])];
    while let Some((v, from, path)) = stack.pop() {
        let mut children = 0;
        for &e in tree.embedding[v].iter().rev() {
            if e == from {
                continue;
            }
            children += 1;
            let w = tree.other_end(e, v);
            let mut p = path.clone();
            p.push(w);
            stack.push((w, e, p));
        }
        if children == 0 && v != root {
            out.push(path);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicReport {
    pub monotone: bool,
    /// `(leaf, vertex)`: first vertex on the leaf's geodesic where the class
    /// fails to move strictly away from the root.
    pub violation: Option<(usize, usize)>,
    pub geodesics_checked: usize,
}

/// On the right of the root classes must strictly increase towards each
/// leaf, on the left strictly decrease.
pub fn check_geodesic_monotonicity(tree: &ReebTree) -> Result<GeodesicReport> {
    let root = tree.root_id.ok_or(Error::Unrooted)?;
    let paths = geodesics(tree)?;
    let rc = tree.vertices[root].preorder_class as i64;
    let mut violation = None;
    for path in &paths {
        let leaf = *path.last().expect("non-empty path");
        let dir = (tree.vertices[leaf].preorder_class as i64 - rc).signum();
        let mut prev = rc;
        for &v in &path[1..] {
            let c = tree.vertices[v].preorder_class as i64;
            if dir == 0 || (c - prev).signum() != dir {
                violation = Some((leaf, v));
                break;
            }
            prev = c;
        }
        if violation.is_some() {
            break;
        }
    }
    Ok(GeodesicReport { monotone: violation.is_none(), violation, geodesics_checked: paths.len() })
}

/// Hand assembly of a tree, for tests and deserialisation. `embedding`
/// defaults to edge order when `None`.
pub fn tree_from_parts(
    xs: &[f64],
    kinds: &[VertexKind],
    edges: &[(usize, usize)],
    embedding: Option<Vec<Vec<usize>>>,
    root: Option<usize>,
    tau: f64,
) -> ReebTree {
    let vertices = xs
        .iter()
        .zip(kinds)
        .enumerate()
        .map(|(id, (&x, &kind))| ReebVertex { id, x, y_repr: 0.0, kind, preorder_class: 0 })
        .collect();
    let embedding = embedding.unwrap_or_else(|| {
        (0..xs.len())
            .map(|v| (0..edges.len()).filter(|&e| edges[e].0 == v || edges[e].1 == v).collect())
            .collect()
    });
    let mut t = ReebTree { vertices, edges: edges.to_vec(), embedding, root_id: root, bands: Vec::new(), origin: root.map(OriginFiber::Vertex), tau };
    t.assign_preorder();
    t
}

//! Canonical text encoding of rooted Poincaré-Reeb trees; the grammar is
//! documented in `docs/tree-code.md`.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{ReebTree, VertexKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeOptions {
    /// Contract valency-2 vertices of odd tangencies before encoding.
    pub drop_odd: bool,
}

/// `R` followed by the root's subtrees in counterclockwise order from the
/// top-left; each vertex is `(` side `[` class `]` subtrees `)` where the
/// side is the sign of `x` and the class counts preorder classes away from
/// the root's. Children are listed counterclockwise after the parent edge.
pub fn canonical_code(tree: &ReebTree, opts: CodeOptions) -> Result<String> {
    let root = tree.root_id.ok_or(Error::Unrooted)?;
    let rc = tree.vertices[root].preorder_class as i64;
    let mut out = String::from("R");
    for &e in &tree.embedding[root] {
        emit(tree, e, root, rc, opts, &mut out);
    }
    Ok(out)
}

fn emit(tree: &ReebTree, mut e: usize, mut from: usize, rc: i64, opts: CodeOptions, out: &mut String) {
    let mut v = tree.other_end(e, from);
    while opts.drop_odd && tree.vertices[v].kind == VertexKind::OddFlagged && tree.degree(v) == 2 {
        let next = if tree.embedding[v][0] == e { tree.embedding[v][1] } else { tree.embedding[v][0] };
        from = v;
        e = next;
        v = tree.other_end(e, from);
    }
    let side = if tree.vertices[v].x < tree.vertices[tree.root_id.unwrap_or(v)].x { 'L' } else { 'R' };
    let class = (tree.vertices[v].preorder_class as i64 - rc).abs();
    let _ = write!(out, "({side}[{class}]");
    let emb = &tree.embedding[v];
    let at = emb.iter().position(|&k| k == e).unwrap_or(0);
    for k in 1..emb.len() {
        emit(tree, emb[(at + k) % emb.len()], v, rc, opts, out);
    }
    out.push(')');
}

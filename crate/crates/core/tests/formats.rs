mod common;

use std::path::PathBuf;

use curvetree::io::{self, svg_document, tree_from_json, tree_to_json, SvgInput, TreeJson};
use curvetree::pipeline::Analyzer;
use curvetree::reeb::{canonical_code, tree_from_parts, CodeOptions, ReebTree, VertexKind};
use curvetree::trace::TraceConfig;
use curvetree::Error;

fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

/// Recursive-descent check of the documented grammar; returns the number
/// of non-root vertices.
fn parse_code(code: &str) -> Result<usize, String> {
    fn child(s: &[u8], i: &mut usize, count: &mut usize) -> Result<(), String> {
        let expect = |i: &mut usize, c: u8| {
            if s.get(*i) == Some(&c) {
                *i += 1;
                Ok(())
            } else {
                Err(format!("expected {:?} at {}", c as char, *i))
            }
        };
        expect(i, b'(')?;
        match s.get(*i) {
            Some(b'L' | b'R') => *i += 1,
            _ => return Err(format!("expected side at {}", *i)),
        }
        expect(i, b'[')?;
        let start = *i;
        while s.get(*i).is_some_and(u8::is_ascii_digit) {
            *i += 1;
        }
        if *i == start {
            return Err(format!("expected class at {start}"));
        }
        expect(i, b']')?;
        *count += 1;
        while s.get(*i) == Some(&b'(') {
            child(s, i, count)?;
        }
        expect(i, b')')
    }
    let s = code.as_bytes();
    if s.first() != Some(&b'R') {
        return Err("code must start with R".into());
    }
    let (mut i, mut count) = (1, 0);
    while i < s.len() {
        child(s, &mut i, &mut count)?;
    }
    Ok(count)
}

fn y_tree() -> ReebTree {
    use VertexKind::*;
    // left leaf, root, split, lower and upper right leaves
    let mut t = tree_from_parts(
        &[-0.1, 0.0, 0.05, 0.1, 0.1],
        &[Leaf, Root, Internal, Leaf, Leaf],
        &[(0, 1), (1, 2), (2, 3), (2, 4)],
        Some(vec![vec![0], vec![0, 1], vec![1, 2, 3], vec![2], vec![3]]),
        Some(1),
        1e-9,
    );
    t.vertices[3].y_repr = -0.2;
    t.vertices[4].y_repr = 0.2;
    t
}

#[test]
fn grammar_accepts_codes_and_rejects_garbage() {
    assert_eq!(parse_code("R(L[1])(R[1](R[2])(R[2]))"), Ok(4));
    assert_eq!(parse_code("R"), Ok(0));
    for bad in ["", "(L[1])", "R(L[])", "R(X[1])", "R(L[1]", "R(L[1]))"] {
        assert!(parse_code(bad).is_err(), "{bad:?} accepted");
    }
}

#[test]
fn documented_examples_reproduce() {
    let doc = std::fs::read_to_string(repo_file("../../docs/tree-code.md")).unwrap();
    let rows: Vec<Vec<String>> = doc
        .lines()
        .filter(|l| l.starts_with("| `"))
        .map(|l| l.split('|').skip(1).map(|c| c.trim().trim_matches('`').to_string()).collect())
        .collect();
    assert!(rows.len() >= 7, "examples table not found");
    for row in rows {
        let (poly, eps, code, overrides) = (&row[0], row[1].parse::<f64>().unwrap(), &row[2], &row[3]);
        let cfg = TraceConfig::parse(&overrides.replace(';', "\n")).unwrap();
        let n = parse_code(code).unwrap_or_else(|e| panic!("{code}: {e}"));
        let a = Analyzer::new(&common::poly(poly), &cfg).unwrap();
        let l = a.analyze_level(eps).unwrap();
        assert_eq!(&l.code, code, "{poly} at {eps}");
        assert_eq!(l.tree.vertices.len(), n + 1, "{poly}");
    }
}

#[test]
fn tree_json_matches_golden_file() {
    let t = y_tree();
    assert_eq!(canonical_code(&t, CodeOptions::default()).unwrap(), "R(L[1])(R[1](R[2])(R[2]))");
    let text = io::to_json(&tree_to_json(&t)).unwrap();
    let golden = std::fs::read_to_string(repo_file("tests/golden/y_tree.json")).unwrap();
    assert_eq!(text, golden);
    let parsed: TreeJson = serde_json::from_str(&golden).unwrap();
    let back = tree_from_json(&parsed).unwrap();
    assert_eq!(canonical_code(&back, CodeOptions::default()).unwrap(), "R(L[1])(R[1](R[2])(R[2]))");
}

#[test]
fn malformed_tree_json_is_rejected() {
    let mut j = tree_to_json(&y_tree());
    j.edges.push([0, 9]);
    assert!(matches!(tree_from_json(&j), Err(Error::InvalidArgument(_))));
    let mut j = tree_to_json(&y_tree());
    j.root = Some(5);
    assert!(tree_from_json(&j).is_err());
}

#[test]
fn svg_counts_elements() {
    let a = Analyzer::new(&common::poly(common::COSTE), &TraceConfig::default()).unwrap();
    let l = a.analyze_level(0.05).unwrap();
    let doc = svg_document(&SvgInput { radius: a.nbhd.radius, curve: Some(&l.curve), branches: &a.branches, tree: Some(&l.tree) }).unwrap();
    let count = |needle: &str| doc.matches(needle).count();
    assert_eq!(count(r#"class="curve""#), 1);
    assert_eq!(count(r#"class="polar""#), a.branches.len());
    assert_eq!(count(r#"class="tree-edge""#), l.tree.edges.len());
    assert_eq!(count(r#"class="vertex""#) + count(r#"class="root""#), l.tree.vertices.len());
    assert_eq!(count(r#"class="root""#), 1);
    assert!(doc.starts_with("<svg") && doc.ends_with("</svg>\n"));
    // same input, same bytes
    let again = svg_document(&SvgInput { radius: a.nbhd.radius, curve: Some(&l.curve), branches: &a.branches, tree: Some(&l.tree) }).unwrap();
    assert_eq!(doc, again);
}

#[test]
fn svg_of_empty_tree_is_an_error() {
    let empty = tree_from_parts(&[], &[], &[], None, None, 1e-9);
    let r = svg_document(&SvgInput { radius: 1.0, curve: None, branches: &[], tree: Some(&empty) });
    assert!(matches!(r, Err(Error::Empty(_))));
}

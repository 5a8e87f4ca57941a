use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use curvetree::poly::{sylvester_resultant, Polynomial, UniPolyOverPoly};
use curvetree::reeb::{tree_from_parts, ReebTree, VertexKind};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

pub fn univariate(max_deg: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rational(), 2..=max_deg + 1).prop_filter("nonconstant", |c| {
        c.iter().skip(1).any(|v| *v != q(0, 1))
    })
}

pub fn eval_uni(c: &[BigRational], t: &BigRational) -> BigRational {
    c.iter().rev().fold(q(0, 1), |acc, a| acc * t + a)
}

/// The resultant of `x - a(t)` and `y - b(t)` is nonzero and vanishes at
/// `(a(s), b(s))`.
pub fn resultant_identity_holds(a: &[BigRational], b: &[BigRational], s: &BigRational) -> bool {
    let consts = |c: &[BigRational]| c.iter().cloned().map(Polynomial::constant).collect::<Vec<_>>();
    let g = UniPolyOverPoly::parametrisation(Polynomial::x(), &consts(a)).unwrap();
    let h = UniPolyOverPoly::parametrisation(Polynomial::y(), &consts(b)).unwrap();
    let r = sylvester_resultant(&g, &h).unwrap();
    !r.is_zero() && r.evaluate_exact(&eval_uni(a, s), &eval_uni(b, s)) == q(0, 1)
}

/// Random rooted plane tree: vertex 0 is the root at `x = 0`, vertex `i`
/// hangs from `parent[i] < i`, abscissas are small integers so ties occur.
#[derive(Clone, Debug)]
pub struct RandomTree {
    pub xs: Vec<f64>,
    pub edges: Vec<(usize, usize)>,
}

pub fn random_tree() -> impl Strategy<Value = RandomTree> {
    (2usize..=14)
        .prop_flat_map(|n| (prop::collection::vec(any::<u32>(), n - 1), prop::collection::vec(-6i32..=6, n - 1)))
        .prop_map(|(parents, xs)| {
            let mut all = vec![0.0];
            all.extend(xs.iter().map(|&x| x as f64));
            let edges = parents.iter().enumerate().map(|(k, &p)| (p as usize % (k + 1), k + 1)).collect();
            RandomTree { xs: all, edges }
        })
}

pub fn build(t: &RandomTree) -> ReebTree {
    let n = t.xs.len();
    let mut deg = vec![0; n];
    for &(a, b) in &t.edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let kinds: Vec<VertexKind> = (0..n)
        .map(|v| match v {
            0 => VertexKind::Root,
            _ if deg[v] == 1 => VertexKind::Leaf,
            _ => VertexKind::Internal,
        })
        .collect();
    tree_from_parts(&t.xs, &kinds, &t.edges, None, Some(0), 0.5)
}

/// Walks every root-to-leaf path from parent pointers and compares integer
/// abscissas directly.
pub fn brute_force_monotone(t: &RandomTree) -> (bool, usize) {
    let n = t.xs.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &t.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let leaves: Vec<usize> = (1..n).filter(|&v| adj[v].len() == 1).collect();
    let ok = leaves.iter().all(|&leaf| {
        let mut path = vec![leaf];
        while *path.last().unwrap() != 0 {
            path.push(parent[*path.last().unwrap()]);
        }
        path.reverse();
        let dir = (t.xs[leaf] - t.xs[0]).signum();
        dir != 0.0 && path.windows(2).all(|w| (t.xs[w[1]] - t.xs[w[0]]) * dir > 0.0)
    });
    (ok, leaves.len())
}


//! Sweep construction. Fibers are computed from the polynomial itself
//! (sign-change roots of `f(x0, .) - eps` inside the disk), so thin parts
//! of the disk that the polygon does not resolve still contribute bands.

use crate::error::{Error, Result};
use crate::polar::TangencyPoint;
use crate::poly::univariate::sign_change_roots_dd;
use crate::poly::{Dd, Polynomial};
use crate::trace::LevelCurve;

use super::{Band, OriginFiber, ReebTree, ReebVertex, VertexKind};

/// Intervals of `{f <= eps}` on the vertical line `x`, restricted to the
/// open disk of `radius`, bottom to top. Intervals reaching the disk
/// boundary belong to other components and are dropped.
pub fn column_fiber(f: &Polynomial, eps: f64, x: f64, radius: f64) -> Vec<(f64, f64)> {
    let h2 = radius * radius - x * x;
    if h2 <= 0.0 {
        return Vec::new();
    }
    let ymax = h2.sqrt();
    let mut c = f.restrict_x(x);
    if c.is_empty() {
        c.push(Dd::ZERO);
    }
    c[0] = c[0] - Dd::from(eps);
    let roots = sign_change_roots_dd(&c, -ymax, ymax);
    let mut cuts = Vec::with_capacity(roots.len() + 2);
    cuts.push(-ymax);
    cuts.extend(roots);
    cuts.push(ymax);
    let eval = |y: f64| {
        let yd = Dd::from(y);
        c.iter().rev().fold(Dd::ZERO, |acc, k| acc * yd + *k).to_f64()
    };
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if eval(0.5 * (a + b)) < 0.0 {
            if a == -ymax || b == ymax {
                continue;
            }
            out.push((a, b));
        }
    }
    out
}

struct Cluster {
    lo: f64,
    hi: f64,
    members: Vec<usize>,
}

fn clusters(tangencies: &[TangencyPoint], tau: f64) -> Vec<Cluster> {
    let mut idx: Vec<usize> = (0..tangencies.len()).collect();
    idx.sort_by(|&a, &b| tangencies[a].position.0.total_cmp(&tangencies[b].position.0));
    let mut out: Vec<Cluster> = Vec::new();
    for i in idx {
        let x = tangencies[i].position.0;
        match out.last_mut() {
            Some(c) if x - c.hi <= tau => {
                c.hi = x;
                c.members.push(i);
            }
            _ => out.push(Cluster { lo: x, hi: x, members: vec![i] }),
        }
    }
    out
}

fn overlaps(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 < b.1 && b.0 < a.1
}

fn mismatch(x: f64, detail: impl Into<String>) -> Error {
    Error::EventMismatch { x, detail: detail.into() }
}

/// Builds the tree of the disk bounded by `curve` from its vertical
/// tangencies. The tie tolerance is `tau_rel * radius`.
pub fn build_reeb(f: &Polynomial, curve: &LevelCurve, tangencies: &[TangencyPoint], tau_rel: f64) -> Result<ReebTree> {
    let eps = curve.epsilon;
    let radius = curve.nbhd.radius;
    let tau = tau_rel * radius;
    let cl = clusters(tangencies, tau);
    if cl.len() < 2 {
        return Err(mismatch(cl.first().map_or(0.0, |c| c.lo), "fewer than two critical abscissas"));
    }
    let fiber = |x: f64| column_fiber(f, eps, x, radius);

    let mut vertices: Vec<ReebVertex> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut embedding: Vec<Vec<usize>> = Vec::new();
    let mut bands: Vec<Band> = Vec::new();
    let mut origin: Option<OriginFiber> = None;
    let mut state: Vec<usize> = Vec::new();
    const OPEN: usize = usize::MAX;

    for (ci, c) in cl.iter().enumerate() {
        let gl = if ci > 0 { c.lo - cl[ci - 1].hi } else { f64::INFINITY };
        let gr = if ci + 1 < cl.len() { cl[ci + 1].lo - c.hi } else { f64::INFINITY };
        let h = (0.25 * gl.min(gr)).min(0.01 * radius);
        let (xl, xr) = (c.lo - h, c.hi + h);
        let left = fiber(xl);
        let right = fiber(xr);
        if left.len() != state.len() {
            return Err(mismatch(c.lo, format!("{} bands arrive but {} were tracked", left.len(), state.len())));
        }

        // connected components of the left/right overlap graph
        let nl = left.len();
        let mut comp: Vec<usize> = (0..nl + right.len()).collect();
        fn root(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        for (i, l) in left.iter().enumerate() {
            for (j, r) in right.iter().enumerate() {
                if overlaps(*l, *r) {
                    let (a, b) = (root(&mut comp, i), root(&mut comp, nl + j));
                    comp[a] = b;
                }
            }
        }
        let mut groups: Vec<(Vec<usize>, Vec<usize>, f64, f64)> = Vec::new();
        let mut group_of = vec![usize::MAX; nl + right.len()];
        for k in 0..nl + right.len() {
            let r = root(&mut comp, k);
            if group_of[r] == usize::MAX {
                group_of[r] = groups.len();
                groups.push((Vec::new(), Vec::new(), f64::MAX, f64::MIN));
            }
            let g = &mut groups[group_of[r]];
            let iv = if k < nl { left[k] } else { right[k - nl] };
            if k < nl {
                g.0.push(k);
            } else {
                g.1.push(k - nl);
            }
            g.2 = g.2.min(iv.0);
            g.3 = g.3.max(iv.1);
        }

        // each tangency belongs to the component whose hull is nearest
        let mut owned: Vec<Vec<usize>> = vec![Vec::new(); groups.len()];
        for &t in &c.members {
            let y = tangencies[t].position.1;
            let best = groups
                .iter()
                .enumerate()
                .map(|(g, (_, _, lo, hi))| (g, if y < *lo { lo - y } else if y > *hi { y - hi } else { 0.0 }))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((g, _)) => owned[g].push(t),
                None => return Err(mismatch(c.lo, "tangency with an empty fiber on both sides")),
            }
        }

        let mut next = vec![OPEN; right.len()];
        for (g, (ls, rs, lo, hi)) in groups.iter().enumerate() {
            match owned[g].as_slice() {
                [] => {
                    if ls.len() == 1 && rs.len() == 1 {
                        next[rs[0]] = state[ls[0]];
                        if c.lo - tau <= 0.0 && 0.0 <= c.hi + tau && *lo < 0.0 && 0.0 < *hi {
                            origin = Some(OriginFiber::Edge(state[ls[0]], 0.5 * (lo + hi)));
                        }
                    } else {
                        return Err(mismatch(
                            c.lo,
                            format!("{} -> {} intervals change without a tangency", ls.len(), rs.len()),
                        ));
                    }
                }
                [t] => {
                    let tp = &tangencies[*t];
                    let v = vertices.len();
                    let kind = match (ls.len(), rs.len()) {
                        (0, 0) => return Err(mismatch(c.lo, "isolated tangency")),
                        (1, 0) | (0, 1) => VertexKind::Leaf,
                        (1, 1) => VertexKind::OddFlagged,
                        _ => VertexKind::Internal,
                    };
                    let seg = fiber_segment(f, eps, tp.position, radius);
                    vertices.push(ReebVertex { id: v, x: tp.position.0, y_repr: seg, kind, preorder_class: 0 });
                    let mut emb = Vec::new();
                    for &l in ls.iter().rev() {
                        let e = state[l];
                        edges[e].1 = v;
                        emb.push(e);
                    }
                    for &r in rs {
                        let e = edges.len();
                        edges.push((v, OPEN));
                        next[r] = e;
                        emb.push(e);
                    }
                    embedding.push(emb);
                    if c.lo - tau <= 0.0 && 0.0 <= c.hi + tau && *lo <= 0.0 && 0.0 <= *hi {
                        origin = Some(OriginFiber::Vertex(v));
                    }
                }
                many => {
                    return Err(mismatch(c.lo, format!("{} tangencies share one fiber component", many.len())));
                }
            }
        }
        state = next;

        if ci + 1 < cl.len() {
            let (a, b) = (c.hi, cl[ci + 1].lo);
            let mid = fiber(0.5 * (a + b));
            if mid.len() != state.len() {
                return Err(mismatch(0.5 * (a + b), format!("band holds {} intervals, {} expected", mid.len(), state.len())));
            }
            if a < 0.0 && 0.0 < b && !(cl[ci].hi + tau >= 0.0 || cl[ci + 1].lo - tau <= 0.0) {
                let at0 = fiber(0.0);
                let k = at0
                    .iter()
                    .position(|iv| iv.0 < 0.0 && 0.0 < iv.1)
                    .ok_or_else(|| mismatch(0.0, "origin not in its own fiber"))?;
                if at0.len() != state.len() {
                    return Err(mismatch(0.0, "origin band count differs from the tracked bands"));
                }
                origin = Some(OriginFiber::Edge(state[k], 0.5 * (at0[k].0 + at0[k].1)));
            }
            bands.push(Band { x_lo: a, x_hi: b, edges: state.clone() });
        }
    }
    if !state.is_empty() {
        return Err(mismatch(cl.last().map_or(0.0, |c| c.hi), "bands remain open after the last tangency"));
    }
    let mut tree = ReebTree { vertices, edges, embedding, root_id: None, bands, origin, tau };
    tree.assign_preorder();
    Ok(tree)
}

/// Midpoint of the fiber interval through `p` at its own abscissa.
fn fiber_segment(f: &Polynomial, eps: f64, p: (f64, f64), radius: f64) -> f64 {
    let iv = column_fiber(f, eps, p.0, radius);
    iv.iter()
        .min_by(|a, b| {
            let da = if p.1 < a.0 { a.0 - p.1 } else if p.1 > a.1 { p.1 - a.1 } else { 0.0 };
            let db = if p.1 < b.0 { b.0 - p.1 } else if p.1 > b.1 { p.1 - b.1 } else { 0.0 };
            da.total_cmp(&db)
        })
        .map_or(p.1, |iv| 0.5 * (iv.0 + iv.1))
}

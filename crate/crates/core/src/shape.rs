//! Convexity and star-shapedness of the traced disk.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Point};
use crate::poly::{exact, Definiteness, Polynomial};
use crate::reeb::{ReebTree, VertexKind};
use crate::trace::LevelCurve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimumClass {
    /// Positive definite Hessian: small levels bound convex disks.
    MorseConvex,
    Degenerate,
}

/// Hessian test at the origin, in exact arithmetic.
pub fn classify_minimum(f: &Polynomial) -> Result<MinimumClass> {
    if !f.is_critical_zero_at_origin() {
        return Err(Error::NotACriticalPoint);
    }
    Ok(match f.hessian_class_at_origin() {
        Definiteness::PositiveDefinite => MinimumClass::MorseConvex,
        _ => MinimumClass::Degenerate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub a: Point,
    pub b: Point,
    pub m: Point,
    /// `f(M) - eps`, rounded from the exact value.
    pub excess: f64,
    /// `f(M) > eps` decided in exact rational arithmetic at the stored `m`.
    pub exits: bool,
}

/// Evaluates `f` at the midpoint of `[a, b]`. The midpoint is taken in
/// exact arithmetic; `m` is its nearest double.
pub fn midpoint_witness(f: &Polynomial, eps: f64, a: Point, b: Point) -> WitnessReport {
    let two = BigRational::from_integer(2.into());
    let mx = (exact(a.0) + exact(b.0)) / &two;
    let my = (exact(a.1) + exact(b.1)) / &two;
    let diff = f.evaluate_exact(&mx, &my) - exact(eps);
    let m = (to_f64(&mx), to_f64(&my));
    WitnessReport { a, b, m, excess: to_f64(&diff), exits: diff > BigRational::from_integer(0.into()) }
}

fn to_f64(q: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub is_convex: bool,
    /// Largest distance from a curve point to the boundary of the hull.
    pub defect: f64,
    /// Tolerance the defect was compared with (`hull_tol * diameter`).
    pub tolerance: f64,
    pub witness: Option<WitnessReport>,
    /// Vertices of the unrooted tree.
    pub reeb_vertex_count: usize,
    /// The unrooted tree is a path with two leaves.
    pub tree_is_path: bool,
}

impl ConvexityReport {
    /// The hull verdict agrees with the tree shape.
    pub fn consistent(&self) -> bool {
        self.is_convex == self.tree_is_path
    }
}

/// Hull pockets of the curve. The witness takes the two hull vertices
/// closing the deepest pocket, snapped to nearby tree vertices (which sit
/// on exact tangencies), and checks their midpoint leaves the disk.
pub fn convexity_defect(f: &Polynomial, curve: &LevelCurve, tree: &ReebTree, hull_tol: f64) -> ConvexityReport {
    let pts = &curve.points;
    let tolerance = hull_tol * geometry::diameter_bound(pts);
    let (count, tree_is_path) = unrooted_shape(tree);
    let mut hull = geometry::convex_hull(pts);
    hull.sort_unstable();
    let mut defect: f64 = 0.0;
    let mut deepest: Option<(f64, usize, usize)> = None;
    for k in 0..hull.len() {
        let (i, j) = (hull[k], hull[(k + 1) % hull.len()]);
        let (a, b) = (pts[i], pts[j]);
        let mut depth: f64 = 0.0;
        let mut t = (i + 1) % pts.len();
        while t != j {
            depth = depth.max(geometry::point_segment_distance(pts[t], a, b));
            t = (t + 1) % pts.len();
        }
        defect = defect.max(depth);
        if depth > tolerance && deepest.map_or(true, |d| depth > d.0) {
            deepest = Some((depth, i, j));
        }
    }
    let witness = deepest.map(|(_, i, j)| {
        let snap = |p: Point| snap_to_vertex(p, tree, 4.0 * curve.cell_size);
        let w = midpoint_witness(f, curve.epsilon, snap(pts[i]), snap(pts[j]));
        if w.exits {
            w
        } else {
            midpoint_witness(f, curve.epsilon, pts[i], pts[j])
        }
    });
    ConvexityReport { is_convex: defect <= tolerance, defect, tolerance, witness, reeb_vertex_count: count, tree_is_path }
}

fn snap_to_vertex(p: Point, tree: &ReebTree, within: f64) -> Point {
    tree.vertices
        .iter()
        .filter(|v| v.kind != VertexKind::Root)
        .map(|v| (v.x, v.y_repr))
        .map(|q| ((q.0 - p.0).hypot(q.1 - p.1), q))
        .filter(|(d, _)| *d <= within)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map_or(p, |(_, q)| q)
}

/// Vertex count and path test of the tree with a subdividing root removed.
fn unrooted_shape(tree: &ReebTree) -> (usize, bool) {
    let inserted = tree.root_id.is_some_and(|r| {
        let v = &tree.vertices[r];
        v.kind == VertexKind::Root && v.x == 0.0 && tree.degree(r) == 2
    });
    let n = tree.vertices.len() - usize::from(inserted);
    let leaves = (0..tree.vertices.len()).filter(|&v| tree.degree(v) == 1).count();
    let max_degree = (0..tree.vertices.len()).map(|v| tree.degree(v)).max().unwrap_or(0);
    (n, leaves == 2 && max_degree <= 2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarReport {
    pub is_star: bool,
    /// Kernel polygon, counterclockwise; empty when the disk is not star-shaped.
    pub kernel: Vec<Point>,
    /// `Some("y=0")` when f is even in y.
    pub axis_used: Option<String>,
    /// With a symmetry axis: whether the kernel meets it.
    pub kernel_meets_axis: Option<bool>,
    /// Grid cell size of the trace; the verdict holds for the polygon.
    pub resolution: f64,
}

/// Kernel of the traced polygon: the intersection of the inner half-planes
/// of all its edges, by successive clipping.
pub fn star_kernel(curve: &LevelCurve, symmetric: bool) -> StarReport {
    let mut pts = curve.points.clone();
    if geometry::signed_area(&pts) < 0.0 {
        pts.reverse();
    }
    let kernel = polygon_kernel(&pts);
    let is_star = kernel.len() >= 3 && geometry::signed_area(&kernel) > 0.0;
    let kernel = if is_star { kernel } else { Vec::new() };
    let kernel_meets_axis = symmetric.then(|| {
        let (lo, hi) = kernel.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
        is_star && lo <= 0.0 && hi >= 0.0
    });
    StarReport {
        is_star,
        kernel,
        axis_used: symmetric.then(|| "y=0".to_string()),
        kernel_meets_axis,
        resolution: curve.cell_size,
    }
}

/// Intersection of the left half-planes of the edges of a counterclockwise
/// polygon, starting from its bounding box.
pub fn polygon_kernel(pts: &[Point]) -> Vec<Point> {
    let n = pts.len();
    if n < 3 {
        return Vec::new();
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let mut k = vec![(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)];
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        if a == b {
            continue;
        }
        k = clip(&k, a, b);
        if k.is_empty() {
            break;
        }
    }
    k
}

/// Sutherland-Hodgman step against the half-plane left of `a -> b`.
fn clip(poly: &[Point], a: Point, b: Point) -> Vec<Point> {
    let side = |p: Point| geometry::cross(a, b, p);
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Sampled check that every kernel vertex sees each of `samples` boundary
/// points: the segment between them stays inside the closed polygon up to
/// `tol`.
pub fn verify_kernel(curve: &LevelCurve, kernel: &[Point], samples: usize, tol: f64) -> bool {
    let pts = &curve.points;
    let step = (pts.len() / samples.max(1)).max(1);
    kernel.iter().all(|&k| {
        (0..pts.len()).step_by(step).all(|i| {
            let s = pts[i];
            (1..16).all(|t| {
                let t = t as f64 / 16.0;
                let p = (k.0 + t * (s.0 - k.0), k.1 + t * (s.1 - k.1));
                geometry::contains(pts, p) || boundary_distance(pts, p) <= tol
            })
        })
    })
}

fn boundary_distance(pts: &[Point], p: Point) -> f64 {
    (0..pts.len())
        .map(|i| geometry::point_segment_distance(p, pts[i], pts[(i + 1) % pts.len()]))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::Analyzer;
    use crate::poly::parse_polynomial;
    use crate::trace::TraceConfig;

    fn poly(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn classifies_minima() {
        assert_eq!(classify_minimum(&poly("x^2 + y^2")).unwrap(), MinimumClass::MorseConvex);
        assert_eq!(classify_minimum(&poly("3x^2 + 5y^2 + x^3 y")).unwrap(), MinimumClass::MorseConvex);
        assert_eq!(classify_minimum(&poly("x^2 + (y^2 - x)^2")).unwrap(), MinimumClass::Degenerate);
        assert_eq!(classify_minimum(&poly("x + y^2")), Err(Error::NotACriticalPoint));
    }

    #[test]
    fn midpoints() {
        let w = midpoint_witness(&poly("x^2 + y^2"), 0.1, (0.2, 0.0), (-0.2, 0.0));
        assert!(!w.exits);
        assert_eq!(w.m, (0.0, 0.0));
        let eps: f64 = 0.1;
        let coste = poly("x^2 + (y^2 - x)^2");
        let w = midpoint_witness(&coste, eps, (eps.sqrt(), eps.powf(0.25)), (eps.sqrt(), -eps.powf(0.25)));
        assert!(w.exits);
        assert!((w.excess - eps).abs() < 1e-12);
    }

    #[test]
    fn circle_is_convex_and_star() {
        let a = Analyzer::new(&poly("x^2 + y^2"), &TraceConfig::default()).unwrap();
        let l = a.analyze_level(0.01).unwrap();
        let r = convexity_defect(&a.f, &l.curve, &l.tree, a.cfg.hull_tol);
        assert!(r.is_convex && r.defect <= 1e-9 && r.consistent(), "{r:?}");
        assert_eq!(r.reeb_vertex_count, 2);
        let s = star_kernel(&l.curve, true);
        assert!(s.is_star && s.kernel_meets_axis == Some(true));
        let area = geometry::signed_area(&s.kernel);
        assert!((area - geometry::signed_area(&l.curve.points)).abs() < 1e-6 * area);
    }

    #[test]
    fn coste_pocket_witness() {
        let a = Analyzer::new(&poly("x^2 + (y^2 - x)^2"), &TraceConfig::default()).unwrap();
        let eps: f64 = 0.1;
        let l = a.analyze_level(eps).unwrap();
        let r = convexity_defect(&a.f, &l.curve, &l.tree, a.cfg.hull_tol);
        assert!(!r.is_convex && r.consistent());
        assert_eq!(r.reeb_vertex_count, 4);
        let w = r.witness.unwrap();
        assert!(w.exits);
        assert!((w.m.0 - eps.sqrt()).abs() < 1e-6 && w.m.1.abs() < 1e-6, "{w:?}");
        assert!(star_kernel(&l.curve, true).is_star);
    }

    #[test]
    fn kernels_of_l_and_e_shapes() {
        let l = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)];
        let k = polygon_kernel(&l);
        assert!((geometry::signed_area(&k) - 1.0).abs() < 1e-12);
        let c = [(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (1.0, 1.0), (1.0, 2.0), (3.0, 2.0), (3.0, 3.0), (0.0, 3.0)];
        assert!(polygon_kernel(&c).len() < 3 || geometry::signed_area(&polygon_kernel(&c)) <= 0.0);
    }
}

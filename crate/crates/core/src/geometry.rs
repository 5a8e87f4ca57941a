//! Planar polygon helpers shared by the tracing, tree and shape modules.

use std::collections::HashMap;

pub type Point = (f64, f64);

/// Shoelace area; positive for counterclockwise polygons.
pub fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc
}

/// Winding number of the closed polygon around `p`.
pub fn winding_number(pts: &[Point], p: Point) -> i32 {
    let n = pts.len();
    let mut wn = 0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if a.1 <= p.1 {
            if b.1 > p.1 && cross(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b.1 <= p.1 && cross(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

pub fn contains(pts: &[Point], p: Point) -> bool {
    winding_number(pts, p) != 0
}

/// `(b - a) x (c - a)`.
pub fn cross(a: Point, b: Point, c: Point) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Closed-segment intersection test (touching counts).
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// First pair of non-adjacent edges of the closed polygon that intersect.
/// Edge `i` runs from vertex `i` to vertex `i + 1`. Edges are bucketed on a
/// uniform grid so only nearby pairs are tested exactly.
pub fn find_self_intersection(pts: &[Point]) -> Option<(usize, usize)> {
    let n = pts.len();
    if n < 4 {
        return None;
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let cells = ((n as f64).sqrt().ceil() as usize).clamp(1, 2048);
    let w = ((xmax - xmin) / cells as f64).max(1e-300);
    let h = ((ymax - ymin) / cells as f64).max(1e-300);
    let cell_of = |x: f64, y: f64| -> (usize, usize) {
        (
            (((x - xmin) / w) as usize).min(cells - 1),
            (((y - ymin) / h) as usize).min(cells - 1),
        )
    };
    let mut buckets: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let (c0, r0) = cell_of(a.0.min(b.0), a.1.min(b.1));
        let (c1, r1) = cell_of(a.0.max(b.0), a.1.max(b.1));
        for c in c0..=c1 {
            for r in r0..=r1 {
                buckets.entry((c, r)).or_default().push(i);
            }
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for list in buckets.values() {
        for (k, &i) in list.iter().enumerate() {
            for &j in &list[k + 1..] {
                let (i, j) = if i < j { (i, j) } else { (j, i) };
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])
                    && best.is_none_or(|b| (i, j) < b)
                {
                    best = Some((i, j));
                }
            }
        }
    }
    best
}

/// Vertical line `X = x` against the closed polygon: sorted disjoint
/// `(y_low, y_high)` intervals of the enclosed region.
pub fn vertical_fiber(pts: &[Point], x: f64) -> Vec<(f64, f64)> {
    let n = pts.len();
    let mut ys = Vec::new();
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if (a.0 <= x) != (b.0 <= x) {
            let t = (x - a.0) / (b.0 - a.0);
            ys.push(a.1 + t * (b.1 - a.1));
        }
    }
    ys.sort_by(f64::total_cmp);
    ys.chunks_exact(2).map(|c| (c[0], c[1])).collect()
}

/// Convex hull vertex indices in counterclockwise order (monotone chain);
/// collinear points are dropped.
pub fn convex_hull(pts: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].0.total_cmp(&pts[b].0).then(pts[a].1.total_cmp(&pts[b].1)));
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && cross(pts[lower[lower.len() - 2]], pts[lower[lower.len() - 1]], pts[i]) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && cross(pts[upper[upper.len() - 2]], pts[upper[upper.len() - 1]], pts[i]) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

pub fn diameter_bound(pts: &[Point]) -> f64 {
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    ((xmax - xmin).powi(2) + (ymax - ymin).powi(2)).sqrt()
}

//! Extraction of the level curve around the origin as a refined polygon.

mod config;
mod march;
mod nbhd;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Point};
use crate::poly::{Dd, Derivatives, Polynomial};

pub use config::TraceConfig;
pub use nbhd::{good_neighbourhood, Neighbourhood, NeighbourhoodChecks};

pub(crate) use march::{march, GridBox};

/// Levels below this use the same double-double residuals, but the
/// pipeline refuses to descend further.
pub const EPS_FLOOR: f64 = 1e-9;

/// Closed counterclockwise polygon on `f = epsilon`, the boundary of the
/// sublevel component containing the origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelCurve {
    pub epsilon: f64,
    pub points: Vec<Point>,
    /// `|f(p) - epsilon|` per point, double-double evaluated.
    pub residuals: Vec<f64>,
    pub nbhd: Neighbourhood,
    /// Residual bound every point was refined to (absolute).
    pub residual_bound: f64,
    /// Cells per side of the grid that produced the polygon.
    pub grid_n: usize,
    /// Cell diagonal of that grid; the polygon's geometric resolution.
    pub cell_size: f64,
}

impl LevelCurve {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn area(&self) -> f64 {
        geometry::signed_area(&self.points)
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)))
    }

    pub fn y_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)))
    }
}

/// Outcome of [`verify_jordan`]; `passed` is the conjunction of the checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanReport {
    pub closed: bool,
    pub simple: bool,
    /// Offending edge pair when not simple; edge `i` joins points `i`, `i+1`.
    pub self_intersection: Option<(usize, usize)>,
    pub winding_number: i32,
    pub signed_area: f64,
    pub counterclockwise: bool,
    pub residuals_ok: bool,
    pub passed: bool,
}

pub fn verify_jordan(curve: &LevelCurve) -> JordanReport {
    let pts = &curve.points;
    let closed = pts.len() >= 3 && pts.iter().all(|p| p.0.is_finite() && p.1.is_finite());
    let self_intersection = if closed { geometry::find_self_intersection(pts) } else { None };
    let simple = closed && self_intersection.is_none();
    let winding_number = geometry::winding_number(pts, (0.0, 0.0));
    let signed_area = geometry::signed_area(pts);
    let counterclockwise = signed_area > 0.0;
    let residuals_ok = curve.residuals.len() == pts.len() && curve.residuals.iter().all(|r| *r <= curve.residual_bound);
    JordanReport {
        closed,
        simple,
        self_intersection,
        winding_number,
        signed_area,
        counterclockwise,
        residuals_ok,
        passed: closed && simple && winding_number == 1 && counterclockwise && residuals_ok,
    }
}

pub fn trace_level(f: &Polynomial, epsilon: f64, nbhd: &Neighbourhood, cfg: &TraceConfig) -> Result<LevelCurve> {
    trace_with(&Derivatives::new(f), epsilon, nbhd, cfg)
}

pub(crate) fn trace_with(d: &Derivatives, epsilon: f64, nbhd: &Neighbourhood, cfg: &TraceConfig) -> Result<LevelCurve> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("level must be positive, got {epsilon}")));
    }
    cfg.validate()?;
    let radius = nbhd.radius;
    let symmetric = d.f.is_even_in_y();

    // coarse pass over the whole neighbourhood square
    let coarse = GridBox::square(radius, cfg.grid_n);
    let contours = march(d, epsilon, &coarse, radius);
    let first = select(&contours, epsilon)?;
    if first.touches_disk || first.touches_frame {
        return Err(Error::LevelEscapesNeighbourhood(epsilon));
    }

    let pts = first.points();
    let pad = 2.0 * coarse.cell_diag();
    let (mut xlo, mut xhi, mut ylo, mut yhi) = bounds(&pts);
    xlo -= pad;
    xhi += pad;
    ylo -= pad;
    yhi += pad;
    if symmetric {
        let m = ylo.abs().max(yhi.abs());
        ylo = -m;
        yhi = m;
    }

    let mut last_failure = None;
    for k in 0..=cfg.max_refine {
        let n = cfg.grid_n << k;
        let mut grown = 0;
        loop {
            let g = GridBox {
                cx: 0.5 * (xlo + xhi),
                cy: 0.5 * (ylo + yhi),
                hx: 0.5 * (xhi - xlo),
                hy: 0.5 * (yhi - ylo),
                nx: n,
                ny: n,
            };
            let contours = march(d, epsilon, &g, radius);
            let c = select(&contours, epsilon)?;
            if c.touches_disk {
                return Err(Error::LevelEscapesNeighbourhood(epsilon));
            }
            if c.touches_frame {
                // a feature the coarse pass missed reaches the box frame
                grown += 1;
                if grown > 6 {
                    return Err(Error::LevelEscapesNeighbourhood(epsilon));
                }
                let (wx, wy) = (0.25 * (xhi - xlo), 0.25 * (yhi - ylo));
                xlo = (xlo - wx).max(-radius);
                xhi = (xhi + wx).min(radius);
                ylo = (ylo - wy).max(-radius);
                yhi = (yhi + wy).min(radius);
                continue;
            }
            let curve = refine_contour(d, epsilon, c, nbhd, cfg, n, g.cell_diag())?;
            match geometry::find_self_intersection(&curve.points) {
                None => return Ok(curve),
                Some((i, _)) => {
                    last_failure = Some(curve.points[i]);
                    break;
                }
            }
        }
    }
    let p = last_failure.unwrap_or((0.0, 0.0));
    Err(Error::RefinementDiverged(p.0, p.1))
}

fn bounds(pts: &[Point]) -> (f64, f64, f64, f64) {
    pts.iter().fold((f64::MAX, f64::MIN, f64::MAX, f64::MIN), |(a, b, c, e), p| {
        (a.min(p.0), b.max(p.0), c.min(p.1), e.max(p.1))
    })
}

/// The smallest contour whose interior contains the origin.
fn select(contours: &[march::Contour], epsilon: f64) -> Result<&march::Contour> {
    contours
        .iter()
        .map(|c| (c, c.points()))
        .filter(|(_, p)| geometry::winding_number(p, (0.0, 0.0)) != 0)
        .min_by(|a, b| geometry::signed_area(&a.1).abs().total_cmp(&geometry::signed_area(&b.1).abs()))
        .map(|(c, _)| c)
        .ok_or(Error::NoComponentAroundOrigin(epsilon))
}

fn refine_contour(
    d: &Derivatives,
    epsilon: f64,
    c: &march::Contour,
    nbhd: &Neighbourhood,
    cfg: &TraceConfig,
    grid_n: usize,
    cell: f64,
) -> Result<LevelCurve> {
    let level = Dd::from(epsilon);
    let tol = cfg.refine_tol * epsilon;
    let mut points = Vec::with_capacity(c.crossings.len());
    let mut residuals = Vec::with_capacity(c.crossings.len());
    for cr in &c.crossings {
        let (p, r) = refine_on_edge(&d.f, level, cr.inside, cr.outside, tol);
        if r > tol {
            // accept only when the miss is at the floating-point resolution of p
            let (gx, gy) = d.gradient(p.0, p.1);
            let floor = 8.0 * gx.hypot(gy) * p.0.abs().max(p.1.abs()).max(f64::MIN_POSITIVE) * f64::EPSILON;
            if r > floor {
                return Err(Error::RefinementDiverged(p.0, p.1));
            }
        }
        if points.last() == Some(&p) || (points.len() > 1 && points[0] == p) {
            continue;
        }
        points.push(p);
        residuals.push(r);
    }
    if geometry::signed_area(&points) < 0.0 {
        points.reverse();
        residuals.reverse();
    }
    let bound = residuals.iter().copied().fold(tol, f64::max);
    Ok(LevelCurve {
        epsilon,
        points,
        residuals,
        nbhd: nbhd.clone(),
        residual_bound: bound,
        grid_n,
        cell_size: cell,
    })
}

/// Safeguarded regula falsi (Illinois) for `f = level` on the segment from
/// `a` (below the level) to `b` (above). Keeping the point on its grid edge
/// preserves the cell topology of the marching-squares loop.
pub(crate) fn refine_on_edge(f: &Polynomial, level: Dd, a: Point, b: Point, tol: f64) -> (Point, f64) {
    let at = |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
    let eval = |p: Point| (f.evaluate_dd(Dd::from(p.0), Dd::from(p.1)) - level).to_f64();
    let (mut ta, mut tb) = (0.0f64, 1.0f64);
    let (mut ra, mut rb) = (eval(a), eval(b));
    if ra >= 0.0 {
        return (a, ra.abs());
    }
    if rb <= 0.0 {
        return (b, rb.abs());
    }
    let mut best = if -ra < rb { (a, -ra) } else { (b, rb) };
    let mut side = 0i8;
    for it in 0..300 {
        let mut t = (ta * rb - tb * ra) / (rb - ra);
        if it % 4 == 3 || !(t > ta && t < tb) {
            t = 0.5 * (ta + tb);
        }
        if t <= ta || t >= tb {
            break;
        }
        let p = at(t);
        let r = eval(p);
        if r.abs() < best.1 {
            best = (p, r.abs());
        }
        if r.abs() <= tol {
            break;
        }
        if r < 0.0 {
            ta = t;
            ra = r;
            if side == -1 {
                rb *= 0.5;
            }
            side = -1;
        } else {
            tb = t;
            rb = r;
            if side == 1 {
                ra *= 0.5;
            }
            side = 1;
        }
        if at(ta) == at(tb) {
            break;
        }
    }
    best
}

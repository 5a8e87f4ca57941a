//! The polar curve `df/dy = 0`: its half-branches at the origin and the
//! vertical tangencies of level curves, which all lie on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Point};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::poly::univariate::{sign_change_roots_dd, QPoly};
use crate::poly::{exact, Dd, Derivatives, Polynomial, Var};
use crate::trace::{LevelCurve, Neighbourhood, TraceConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Samples of one polar half-branch from the origin outward.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfBranch {
    pub id: usize,
    pub side: Side,
    pub samples: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencyPoint {
    pub position: Point,
    pub parity: Parity,
    pub branch_id: Option<usize>,
    /// Another candidate fell within the merge tolerance and was absorbed.
    pub merged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneQuantity {
    CoordinateX,
    FunctionF,
    SquaredDistance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub strictly_increasing: bool,
    pub strictly_decreasing: bool,
    /// First sample index breaking the direction set by the first step.
    pub violation: Option<usize>,
}

impl MonotonicityReport {
    pub fn is_monotone(&self) -> bool {
        self.strictly_increasing || self.strictly_decreasing
    }
}

/// `df/dy`, after checking that it is not divisible by `x`.
pub fn polar_curve(f: &Polynomial) -> Result<Polynomial> {
    if f.degree_in(Var::Y) < 1 {
        return Err(Error::ConstantInY);
    }
    Ok(f.partial(Var::Y))
}

/// Exact test on the term map: does `x` divide `df/dy`?
pub fn polar_divisible_by_x(f: &Polynomial) -> bool {
    f.partial(Var::Y).is_divisible_by_x()
}

pub fn polar_half_branches(f: &Polynomial, nbhd: &Neighbourhood, cfg: &TraceConfig) -> Result<Vec<HalfBranch>> {
    polar_curve(f)?;
    trace_branches(&Derivatives::new(f), nbhd.radius, cfg)
}

pub(crate) fn trace_branches(d: &Derivatives, radius: f64, cfg: &TraceConfig) -> Result<Vec<HalfBranch>> {
    if d.fy.is_zero() {
        return Err(Error::ConstantInY);
    }
    let _ = cfg;
    let r0 = radius / 64.0;
    let seeds = seed_points(&d.fy, r0)?;
    let traced: Vec<Result<Vec<Point>>> = seeds.par_iter().map(|s| follow(&d.fy, *s, radius)).collect();
    let mut branches = Vec::with_capacity(seeds.len());
    for (id, (s, samples)) in seeds.iter().zip(traced).enumerate() {
        let side = if s.0 > 0.0 { Side::Right } else { Side::Left };
        branches.push(HalfBranch { id, side, samples: samples? });
    }
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            // inside the seed circle a crossing would have stopped the
            // inward walk as ambiguous; chords there are too coarse to test
            let (a, b) = (outer_part(&branches[i], r0), outer_part(&branches[j], r0));
            if branches[i].side == branches[j].side && polylines_cross(a, b) {
                return Err(Error::BranchSelfCrossing(i, j));
            }
        }
    }
    Ok(branches)
}

/// Sign changes of `fy` on the circle of radius `r0`, ordered by angle.
///
/// The circle is parametrised rationally, `t -> r0 * rot((1 - t^2, 2t) /
/// (1 + t^2))`, which turns `fy` on the circle into an exact univariate
/// polynomial; its sign-change roots are then isolated in double-double.
/// Branches whose seeds are far closer than any angular sampling (they
/// can be `r0^3` apart) are still separated.
fn seed_points(fy: &Polynomial, r0: f64) -> Result<Vec<Point>> {
    let deg = fy.degree();
    if deg < 0 {
        return Err(Error::SeedDetectionFailed("polar curve is zero".into()));
    }
    let d = deg as usize;
    let r = exact(r0);
    let q = |n: i64, m: i64| BigRational::new(BigInt::from(n), BigInt::from(m));
    // rotations by rational angles, so the point missed at t = infinity is
    // generic; the next is tried if it happens to lie on the polar curve
    for (c, s) in [((3, 5), (4, 5)), ((5, 13), (12, 13)), ((8, 17), (15, 17))] {
        let (c, s) = (q(c.0, c.1), q(s.0, s.1));
        let two = q(2, 1);
        let xt = QPoly::new(vec![&r * &c, -(&r * &s * &two), -(&r * &c)]);
        let yt = QPoly::new(vec![&r * &s, &r * &c * &two, -(&r * &s)]);
        let wt = QPoly::new(vec![q(1, 1), q(0, 1), q(1, 1)]);
        let powers = |p: &QPoly| {
            let mut v = vec![QPoly::new(vec![q(1, 1)])];
            for k in 1..=d {
                let next = v[k - 1].mul(p);
                v.push(next);
            }
            v
        };
        let (xp, yp, wp) = (powers(&xt), powers(&yt), powers(&wt));
        let mut poly = QPoly::new(Vec::new());
        for (m, a) in fy.terms() {
            let (i, j) = (m.x as usize, m.y as usize);
            poly = poly.add(&xp[i].mul(&yp[j]).mul(&wp[d - i - j]).scale(a));
        }
        if poly.degree() < 2 * d as i64 {
            continue;
        }
        let coeffs: Vec<Dd> = poly.0.iter().map(rational_dd).collect();
        let lead = coeffs.last().map_or(1.0, |c| c.to_f64().abs());
        let bound = 1.0 + coeffs.iter().map(|c| c.to_f64().abs() / lead).fold(0.0, f64::max);
        let roots = sign_change_roots_dd(&coeffs, -bound, bound);
        let rot = (c.to_f64().unwrap_or(0.0), s.to_f64().unwrap_or(0.0));
        let mut seeds: Vec<(f64, Point)> = roots
            .into_iter()
            .map(|t| {
                let (u, v) = ((1.0 - t * t) / (1.0 + t * t), 2.0 * t / (1.0 + t * t));
                let p = (r0 * (rot.0 * u - rot.1 * v), r0 * (rot.1 * u + rot.0 * v));
                (p.1.atan2(p.0), p)
            })
            .collect();
        seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
        if seeds.is_empty() {
            return Err(Error::SeedDetectionFailed("no sign change of df/dy on the seed circle".into()));
        }
        if seeds.iter().any(|(_, p)| p.0 == 0.0) {
            return Err(Error::SeedDetectionFailed("polar branch tangent to the vertical axis".into()));
        }
        return Ok(seeds.into_iter().map(|(_, p)| p).collect());
    }
    Err(Error::SeedDetectionFailed("seed circle parametrisation degenerate".into()))
}

fn rational_dd(q: &BigRational) -> Dd {
    let hi = q.to_f64().unwrap_or(0.0);
    let rest = q - exact(hi);
    Dd::new(hi, rest.to_f64().unwrap_or(0.0))
}

/// Continuation of `fy = 0` parametrised by `x`, from `seed` outward to the
/// first sample outside the disk and inward towards the origin. At each
/// abscissa every root of `fy(x, .)` near the predicted ordinate is
/// computed and the closest taken, so a step never jumps silently to a
/// neighbouring branch.
fn follow(fy: &Polynomial, seed: Point, radius: f64) -> Result<Vec<Point>> {
    // the seed comes from the circle parameter in f64; put its ordinate on
    // the curve to root precision at its own abscissa
    let w = 1e-6 * radius;
    let seed = sign_change_roots_dd(&fy.restrict_x(seed.0), seed.1 - w, seed.1 + w)
        .into_iter()
        .min_by(|a, b| (a - seed.1).abs().total_cmp(&(b - seed.1).abs()))
        .map_or(seed, |y| (seed.0, y));
    let fyx = fy.partial(Var::X);
    let fyy = fy.partial(Var::Y);
    let mut slope = {
        let b = fyy.evaluate(seed.0, seed.1);
        if b != 0.0 { -fyx.evaluate(seed.0, seed.1) / b } else { seed.1 / seed.0 }
    };
    if !slope.is_finite() {
        slope = seed.1 / seed.0;
    }
    let inner = walk(fy, seed, slope, radius, true);
    let outer = walk(fy, seed, slope, radius, false);
    let outer = outer.map_err(|x| {
        Error::SeedDetectionFailed(format!(
            "half-branch through ({:.3e}, {:.3e}) lost at x = {x:.6e} (vertical tangent or crossing)",
            seed.0, seed.1
        ))
    })?;
    let mut samples = vec![(0.0, 0.0)];
    samples.extend(inner.unwrap_or_else(|_| Vec::new()).into_iter().rev());
    samples.push(seed);
    samples.extend(outer);
    Ok(samples)
}

/// Samples after `start` (exclusive). Outward walks end at the first
/// sample outside the disk; inward walks stop near the origin or where
/// the branches can no longer be told apart. `Err(x)` when an outward walk
/// loses its branch.
fn walk(fy: &Polynomial, start: Point, slope0: f64, radius: f64, inward: bool) -> std::result::Result<Vec<Point>, f64> {
    let s = if inward { -start.0.signum() } else { start.0.signum() };
    // last three accepted points; the prediction is the quadratic through
    // them, whose error is far below the spacing of nearly tangent branches
    let mut hist: Vec<Point> = vec![start];
    let mut out = Vec::new();
    let x_stop = radius * 1e-7;
    for _ in 0..200_000 {
        let (x, y) = *hist.last().expect("non-empty");
        if !inward && x * x + y * y >= radius * radius {
            return Ok(out);
        }
        if inward && x.abs() <= x_stop {
            return Ok(out);
        }
        let frac = if hist.len() < 3 { 0.002 } else { 0.02 };
        let mut dx = (frac * x.abs()).min(radius / 512.0);
        // keep the chord within CHORD_TOL of the branch: sagitta |y''| dx^2 / 8
        let curv = second_derivative(&hist).abs();
        if curv > 0.0 {
            dx = dx.min((8.0 * CHORD_TOL * radius / curv).sqrt());
        }
        if !inward {
            dx = dx.max(radius * 1e-7);
        }
        let min_dx = if inward { 1e-6 * x.abs() } else { radius * 1e-13 };
        loop {
            let xn = x + s * dx;
            let pred = predict(&hist, slope0, xn);
            let slope = (pred - y) / (xn - x);
            let step = dx.hypot(slope * dx);
            let tiny = (radius * 1e-15).max(1e-13 * pred.abs());
            let w = 8.0 * step + tiny;
            let roots = sign_change_roots_dd(&fy.restrict_x(xn), pred - w, pred + w);
            let mut dist: Vec<(f64, f64)> = roots.iter().map(|r| ((r - pred).abs(), *r)).collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0));
            let ok = match dist.as_slice() {
                [] => false,
                [(d1, _)] => *d1 <= 0.5 * step + tiny,
                [(d1, _), (d2, _), ..] => *d1 <= 0.5 * step + tiny && *d2 > 3.0 * d1,
            };
            if ok && (!inward || xn.signum() == start.0.signum()) {
                let p = (xn, dist[0].1);
                out.push(p);
                hist.push(p);
                if hist.len() > 3 {
                    hist.remove(0);
                }
                break;
            }
            dx *= 0.5;
            if dx < min_dx {
                return if inward { Ok(out) } else { Err(x) };
            }
        }
    }
    if inward {
        Ok(out)
    } else {
        Err(hist.last().map_or(start.0, |p| p.0))
    }
}

/// Largest vertical gap between a traced chord and the branch, relative to
/// the radius.
const CHORD_TOL: f64 = 1e-8;

fn second_derivative(hist: &[Point]) -> f64 {
    match hist {
        [.., (x0, y0), (x1, y1), (x2, y2)] => {
            let d01 = (y1 - y0) / (x1 - x0);
            let d12 = (y2 - y1) / (x2 - x1);
            2.0 * (d12 - d01) / (x2 - x0)
        }
        _ => 0.0,
    }
}

/// Ordinate at `x` of the interpolant through the last points: the tangent
/// line at the start, then the secant, then the quadratic.
fn predict(hist: &[Point], slope0: f64, x: f64) -> f64 {
    match hist {
        [(x0, y0)] => y0 + slope0 * (x - x0),
        [(x0, y0), (x1, y1)] => y1 + (y1 - y0) / (x1 - x0) * (x - x1),
        [.., (x0, y0), (x1, y1), (x2, y2)] => {
            let d01 = (y1 - y0) / (x1 - x0);
            let d12 = (y2 - y1) / (x2 - x1);
            let d012 = (d12 - d01) / (x2 - x0);
            y2 + d12 * (x - x2) + d012 * (x - x2) * (x - x1)
        }
        [] => 0.0,
    }
}

fn outer_part(b: &HalfBranch, r0: f64) -> &[Point] {
    let k = b.samples.iter().position(|p| p.0.hypot(p.1) >= r0 * (1.0 - 1e-9)).unwrap_or(0);
    &b.samples[k..]
}

fn polylines_cross(a: &[Point], b: &[Point]) -> bool {
    for i in 0..a.len().saturating_sub(1) {
        let (a0, a1) = (a[i], a[i + 1]);
        let (axl, axh) = (a0.0.min(a1.0), a0.0.max(a1.0));
        let (ayl, ayh) = (a0.1.min(a1.1), a0.1.max(a1.1));
        for j in 0..b.len().saturating_sub(1) {
            let (b0, b1) = (b[j], b[j + 1]);
            if b0.0.max(b1.0) < axl || b0.0.min(b1.0) > axh || b0.1.max(b1.1) < ayl || b0.1.min(b1.1) > ayh {
                continue;
            }
            if geometry::segments_intersect(a0, a1, b0, b1) {
                return true;
            }
        }
    }
    false
}

pub fn check_monotone_along_branch(branch: &HalfBranch, g: MonotoneQuantity, f: &Polynomial) -> MonotonicityReport {
    let vals: Vec<f64> = branch
        .samples
        .iter()
        .map(|&(x, y)| match g {
            MonotoneQuantity::CoordinateX => x,
            MonotoneQuantity::FunctionF => f.evaluate_dd(Dd::from(x), Dd::from(y)).to_f64(),
            MonotoneQuantity::SquaredDistance => x * x + y * y,
        })
        .collect();
    if g != MonotoneQuantity::FunctionF {
        return monotonicity(&vals);
    }
    // samples lie on the polar curve only to the precision of their
    // ordinate, so f carries an error of about |fyy| dy^2 / 2 there; a step
    // whose change is within the combined noise is not a violation
    let fyy = f.partial(Var::Y).partial(Var::Y);
    let noise: Vec<f64> = branch
        .samples
        .iter()
        .map(|&(x, y)| {
            let dy = 8.0 * f64::EPSILON * x.hypot(y);
            0.5 * fyy.evaluate(x, y).abs() * dy * dy + f.magnitude_at(x, y) * 1e-30
        })
        .collect();
    noisy_monotonicity(&vals, &noise)
}

/// Strict increase, where steps within the summed noise of their endpoints
/// count as ties rather than decreases. At least one step must rise above
/// the noise.
fn noisy_monotonicity(vals: &[f64], noise: &[f64]) -> MonotonicityReport {
    let mut rose = false;
    for k in 1..vals.len() {
        let tol = noise[k] + noise[k - 1];
        let step = vals[k] - vals[k - 1];
        if step <= -tol || (step <= 0.0 && tol == 0.0) {
            return MonotonicityReport { strictly_increasing: false, strictly_decreasing: false, violation: Some(k) };
        }
        rose |= step > tol;
    }
    MonotonicityReport { strictly_increasing: rose, strictly_decreasing: false, violation: if rose { None } else { Some(0) } }
}

pub(crate) fn monotonicity(vals: &[f64]) -> MonotonicityReport {
    if vals.len() < 2 {
        return MonotonicityReport { strictly_increasing: false, strictly_decreasing: false, violation: Some(0) };
    }
    let up = vals[1] > vals[0];
    let down = vals[1] < vals[0];
    if !up && !down {
        return MonotonicityReport { strictly_increasing: false, strictly_decreasing: false, violation: Some(1) };
    }
    for k in 2..vals.len() {
        if (up && vals[k] <= vals[k - 1]) || (down && vals[k] >= vals[k - 1]) {
            return MonotonicityReport { strictly_increasing: false, strictly_decreasing: false, violation: Some(k) };
        }
    }
    MonotonicityReport { strictly_increasing: up, strictly_decreasing: down, violation: None }
}

/// Vertical tangencies of the curve found from sign changes of `df/dy`
/// along its edges, refined by Newton on `(f - eps, df/dy)`.
pub fn vertical_tangencies(curve: &LevelCurve, f: &Polynomial, cfg: &TraceConfig) -> Result<Vec<TangencyPoint>> {
    let d = Derivatives::new(f);
    let mut cands = Vec::new();
    for p in edge_seeds(curve, &d.fy) {
        cands.push((newton_tangency(&d, curve.epsilon, p, cfg)?, None));
    }
    finish(&d, curve, cands, cfg)
}

/// As [`vertical_tangencies`], seeded additionally by the crossing of each
/// traced half-branch with the level. Every half-branch crosses the level
/// exactly once, so thin features the polygon does not resolve are still
/// found. Edge seeds whose Newton iteration fails are dropped here.
pub fn vertical_tangencies_with_branches(
    curve: &LevelCurve,
    f: &Polynomial,
    branches: &[HalfBranch],
    cfg: &TraceConfig,
) -> Result<Vec<TangencyPoint>> {
    let d = Derivatives::new(f);
    let mut cands = Vec::new();
    for b in branches {
        if let Some(p) = branch_crossing(&d, b, curve.epsilon, curve.nbhd.radius)? {
            cands.push((p, Some(b.id)));
        }
    }
    // f is monotone along every half-branch, so each crossing above is the
    // only tangency on its branch; an edge candidate nearest to a branch
    // that already has one is the same point, however flat the tip makes
    // its position along the curve
    let mut absorbed = vec![false; cands.len()];
    for p in edge_seeds(curve, &d.fy) {
        let Ok(q) = newton_tangency(&d, curve.epsilon, p, cfg) else { continue };
        let nearest = branches
            .iter()
            .map(|b| (b.id, distance_to_branches(q, std::slice::from_ref(b))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(id, _)| id);
        if let Some(k) = cands.iter().position(|(_, id)| id.is_some() && *id == nearest) {
            absorbed[k] = true;
            continue;
        }
        cands.push((q, None));
        absorbed.push(false);
    }
    let mut out = finish(&d, curve, cands.clone(), cfg)?;
    for t in &mut out {
        if let Some(k) = cands.iter().position(|(p, _)| *p == t.position) {
            t.merged |= absorbed[k];
        }
    }
    Ok(out)
}

fn edge_seeds(curve: &LevelCurve, fy: &Polynomial) -> Vec<Point> {
    let pts = &curve.points;
    let n = pts.len();
    let vals: Vec<f64> = pts.iter().map(|p| fy.evaluate(p.0, p.1)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (vals[i], vals[j]);
        if a == 0.0 {
            out.push(pts[i]);
        } else if a * b < 0.0 {
            let t = a / (a - b);
            out.push((pts[i].0 + t * (pts[j].0 - pts[i].0), pts[i].1 + t * (pts[j].1 - pts[i].1)));
        }
    }
    out
}

fn newton_tangency(d: &Derivatives, eps: f64, p0: Point, cfg: &TraceConfig) -> Result<Point> {
    let (mut x, mut y) = p0;
    let level = Dd::from(eps);
    for _ in 0..50 {
        let r1 = (d.f.evaluate_dd(Dd::from(x), Dd::from(y)) - level).to_f64();
        let r2 = d.fy.evaluate_dd(Dd::from(x), Dd::from(y)).to_f64();
        let scale = d.fy.magnitude_at(x, y).max(f64::MIN_POSITIVE);
        if r1.abs() <= cfg.refine_tol * eps && r2.abs() <= cfg.branch_tol * scale {
            return Ok((x, y));
        }
        let (a, b) = d.gradient(x, y);
        let c = d.fxy.evaluate(x, y);
        let e = d.fyy.evaluate(x, y);
        let det = a * e - b * c;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (r1 * e - b * r2) / det;
        let dy = (a * r2 - c * r1) / det;
        x -= dx;
        y -= dy;
        if !(x.is_finite() && y.is_finite()) {
            break;
        }
    }
    Err(Error::NewtonDiverged(p0.0, p0.1))
}

/// Root of `fy(x, .)` nearest to `y0` within `w`.
fn polar_root_near(fy: &Polynomial, x: f64, y0: f64, w: f64) -> Option<f64> {
    sign_change_roots_dd(&fy.restrict_x(x), y0 - w, y0 + w)
        .into_iter()
        .min_by(|a, b| (a - y0).abs().total_cmp(&(b - y0).abs()))
}

/// Point of the half-branch where `f = eps`, by bisection in `x` with the
/// branch ordinate re-solved at every abscissa; `None` when the branch
/// stays below the level inside the disk.
fn branch_crossing(d: &Derivatives, b: &HalfBranch, eps: f64, radius: f64) -> Result<Option<Point>> {
    let level = Dd::from(eps);
    let g = |p: Point| (d.f.evaluate_dd(Dd::from(p.0), Dd::from(p.1)) - level).to_f64();
    let s = &b.samples;
    let Some(k) = (1..s.len()).find(|&k| g(s[k]) >= 0.0) else {
        return Ok(None);
    };
    if k == 1 {
        // the level passes between the origin and the innermost sample
        return Err(Error::BelowNumericFloor { value: eps, floor: g(s[1]) + eps });
    }
    let (mut lo, mut hi) = (s[k - 1], s[k]);
    let mut best = hi;
    for _ in 0..120 {
        let xm = 0.5 * (lo.0 + hi.0);
        if xm == lo.0 || xm == hi.0 {
            break;
        }
        let ym_guess = 0.5 * (lo.1 + hi.1);
        let w = 4.0 * (hi.1 - lo.1).abs() + 4.0 * (hi.0 - lo.0).abs() + radius * 1e-14;
        let Some(ym) = polar_root_near(&d.fy, xm, ym_guess, w) else {
            break;
        };
        let pm = (xm, ym);
        best = pm;
        let r = g(pm);
        if r == 0.0 {
            break;
        }
        if r < 0.0 {
            lo = pm;
        } else {
            hi = pm;
        }
    }
    if g(lo).abs() < g(best).abs() {
        best = lo;
    }
    Ok(Some(best))
}

/// Solve `f(x, y) = eps` for `x` near `x0` at fixed `y` (Newton, DD residual).
fn level_x_at(d: &Derivatives, eps: f64, x0: f64, y: f64) -> Option<f64> {
    let level = Dd::from(eps);
    let mut x = x0;
    for _ in 0..60 {
        let r = (d.f.evaluate_dd(Dd::from(x), Dd::from(y)) - level).to_f64();
        let fx = d.fx.evaluate(x, y);
        if fx == 0.0 || !fx.is_finite() {
            return None;
        }
        let step = r / fx;
        x -= step;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Some(x);
        }
    }
    Some(x)
}

/// Even iff `x` restricted to the level curve has a local extremum at `p`:
/// the curve is re-solved at `y +- delta` and both displacements compared.
fn parity_at(d: &Derivatives, eps: f64, p: Point, radius: f64) -> Parity {
    let mut delta = radius * 1e-6;
    while delta <= radius * 1e-2 {
        let up = level_x_at(d, eps, p.0, p.1 + delta);
        let dn = level_x_at(d, eps, p.0, p.1 - delta);
        if let (Some(u), Some(w)) = (up, dn) {
            let (a, b) = (u - p.0, w - p.0);
            let noise = 1e3 * f64::EPSILON * p.0.abs().max(radius * 1e-3);
            if a.abs() > noise && b.abs() > noise {
                return if a.signum() == b.signum() { Parity::Even } else { Parity::Odd };
            }
        }
        delta *= 4.0;
    }
    // flat to this resolution: fall back on the second-order term
    if d.fyy.evaluate(p.0, p.1).abs() > 0.0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn finish(d: &Derivatives, curve: &LevelCurve, cands: Vec<(Point, Option<usize>)>, cfg: &TraceConfig) -> Result<Vec<TangencyPoint>> {
    let radius = curve.nbhd.radius;
    let merge = cfg.merge_tol * radius;
    let mut out: Vec<TangencyPoint> = Vec::new();
    for (p, branch_id) in cands {
        if let Some(t) = out.iter_mut().find(|t| (t.position.0 - p.0).hypot(t.position.1 - p.1) <= merge) {
            t.merged = true;
            if t.branch_id.is_none() {
                t.branch_id = branch_id;
                t.position = p;
            }
            continue;
        }
        out.push(TangencyPoint { position: p, parity: Parity::Even, branch_id, merged: false });
    }
    for t in &mut out {
        t.parity = parity_at(d, curve.epsilon, t.position, radius);
    }
    out.sort_by(|a, b| a.position.0.total_cmp(&b.position.0).then(a.position.1.total_cmp(&b.position.1)));
    Ok(out)
}

/// Distance from `p` to the nearest traced half-branch polyline.
pub fn distance_to_branches(p: Point, branches: &[HalfBranch]) -> f64 {
    let mut best = f64::INFINITY;
    for b in branches {
        for w in b.samples.windows(2) {
            best = best.min(geometry::point_segment_distance(p, w[0], w[1]));
        }
    }
    best
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::{self, MonotoneQuantity};
use crate::poly::{Dd, Derivatives, Polynomial};

use super::TraceConfig;

/// Evidence gathered for one accepted radius.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NeighbourhoodChecks {
    pub accepted: bool,
    pub radial_samples: usize,
    pub angular_samples: usize,
    /// `f > 0` at every sample of the punctured disk.
    pub positive: bool,
    pub half_branches: usize,
    /// Half-branches were traced to the boundary without crossing.
    pub branches_disjoint: bool,
    pub x_monotone: bool,
    pub f_monotone: bool,
    pub distance_monotone: bool,
    /// Larger candidates that failed, with the reason.
    pub rejected: Vec<(f64, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighbourhood {
    pub radius: f64,
    pub checks: NeighbourhoodChecks,
}

impl Neighbourhood {
    /// A radius taken on trust, with no checks recorded.
    pub fn assumed(radius: f64) -> Self {
        Neighbourhood { radius, checks: NeighbourhoodChecks::default() }
    }

    pub fn is_accepted(&self) -> bool {
        self.checks.accepted
    }
}

const RADIAL: usize = 160;
const ANGULAR: usize = 360;

pub fn good_neighbourhood(f: &Polynomial, cfg: &TraceConfig) -> Result<Neighbourhood> {
    cfg.validate()?;
    if !f.is_critical_zero_at_origin() {
        return Err(Error::NotAStrictMinimum("f(0,0) or the gradient at the origin is nonzero".into()));
    }
    polar::polar_curve(f)?;
    let d = Derivatives::new(f);
    let mut radii = cfg.nbhd_candidates.clone();
    radii.sort_by(|a, b| b.total_cmp(a));
    radii.dedup();
    let smallest = *radii.last().expect("validated non-empty");
    let mut rejected = Vec::new();
    for &r in &radii {
        if let Some((x, y, v)) = first_nonpositive(&d, r) {
            if r == smallest {
                return Err(Error::NotAStrictMinimum(format!("f({x:.6e}, {y:.6e}) = {v:.3e} <= 0")));
            }
            rejected.push((r, format!("f({x:.4e}, {y:.4e}) = {v:.3e} <= 0")));
            continue;
        }
        match check_branches(&d, r, cfg) {
            Ok(mut checks) => {
                checks.rejected = rejected;
                return Ok(Neighbourhood { radius: r, checks });
            }
            Err(reason) => rejected.push((r, reason)),
        }
    }
    let summary: Vec<String> = rejected.iter().map(|(r, m)| format!("r={r}: {m}")).collect();
    Err(Error::NoValidRadius(summary.join("; ")))
}

/// Polar sampling of the closed punctured disk.
fn first_nonpositive(d: &Derivatives, r: f64) -> Option<(f64, f64, f64)> {
    for i in 1..=RADIAL {
        let rho = r * i as f64 / RADIAL as f64;
        for k in 0..ANGULAR {
            let t = std::f64::consts::TAU * k as f64 / ANGULAR as f64;
            let (x, y) = (rho * t.cos(), rho * t.sin());
            let mut v = d.f.evaluate(x, y);
            if v <= 0.0 {
                v = d.f.evaluate_dd(Dd::from(x), Dd::from(y)).to_f64();
            }
            if v <= 0.0 {
                return Some((x, y, v));
            }
        }
    }
    None
}

fn check_branches(d: &Derivatives, r: f64, cfg: &TraceConfig) -> std::result::Result<NeighbourhoodChecks, String> {
    let branches = polar::trace_branches(d, r, cfg).map_err(|e| e.to_string())?;
    let mut checks = NeighbourhoodChecks {
        accepted: true,
        radial_samples: RADIAL,
        angular_samples: ANGULAR,
        positive: true,
        half_branches: branches.len(),
        branches_disjoint: true,
        x_monotone: true,
        f_monotone: true,
        distance_monotone: true,
        rejected: Vec::new(),
    };
    for b in &branches {
        let x = polar::check_monotone_along_branch(b, MonotoneQuantity::CoordinateX, &d.f);
        let fv = polar::check_monotone_along_branch(b, MonotoneQuantity::FunctionF, &d.f);
        let dist = polar::check_monotone_along_branch(b, MonotoneQuantity::SquaredDistance, &d.f);
        checks.x_monotone &= x.is_monotone();
        checks.f_monotone &= fv.strictly_increasing;
        checks.distance_monotone &= dist.strictly_increasing;
    }
    if !(checks.x_monotone && checks.f_monotone && checks.distance_monotone) {
        return Err(format!(
            "monotonicity along half-branches failed (x: {}, f: {}, distance: {})",
            checks.x_monotone, checks.f_monotone, checks.distance_monotone
        ));
    }
    Ok(checks)
}

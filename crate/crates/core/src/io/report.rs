use serde::{Deserialize, Serialize};

use crate::pipeline::{Analyzer, LevelAnalysis};
use crate::polar::{self, TangencyPoint};
use crate::reeb::{self, GeodesicReport, ValidationReport};
use crate::shape::{self, ConvexityReport, MinimumClass, StarReport};
use crate::trace::{JordanReport, Neighbourhood};

/// Everything `analyze` computes for one level, minus the raw geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub poly: String,
    pub epsilon: f64,
    pub minimum_class: Option<MinimumClass>,
    pub neighbourhood: Neighbourhood,
    pub grid_n: usize,
    pub cell_size: f64,
    pub curve_points: usize,
    pub max_residual: f64,
    pub jordan: JordanReport,
    pub polar_divisible_by_x: bool,
    pub half_branches: usize,
    pub tangencies: Vec<TangencyPoint>,
    pub validation: ValidationReport,
    pub code: String,
    pub geodesics: Option<GeodesicReport>,
    pub is_convex: bool,
    pub convexity: ConvexityReport,
    pub star: StarReport,
}

impl AnalyzeReport {
    pub fn new(a: &Analyzer, l: &LevelAnalysis) -> Self {
        let convexity = shape::convexity_defect(&a.f, &l.curve, &l.tree, a.cfg.hull_tol);
        AnalyzeReport {
            poly: a.f.to_string(),
            epsilon: l.curve.epsilon,
            minimum_class: shape::classify_minimum(&a.f).ok(),
            neighbourhood: a.nbhd.clone(),
            grid_n: l.curve.grid_n,
            cell_size: l.curve.cell_size,
            curve_points: l.curve.points.len(),
            max_residual: l.curve.max_residual(),
            jordan: l.jordan.clone(),
            polar_divisible_by_x: polar::polar_divisible_by_x(&a.f),
            half_branches: a.branches.len(),
            tangencies: l.tangencies.clone(),
            validation: l.validation.clone(),
            code: l.code.clone(),
            geodesics: reeb::check_geodesic_monotonicity(&l.tree).ok(),
            is_convex: convexity.is_convex,
            convexity,
            star: shape::star_kernel(&l.curve, a.f.is_even_in_y()),
        }
    }
}

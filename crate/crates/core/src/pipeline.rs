//! One-level analysis: trace, tangencies, tree, root, code.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::{self, HalfBranch, TangencyPoint};
use crate::poly::{Derivatives, Polynomial};
use crate::reeb::{self, CodeOptions, ReebTree, ValidationReport};
use crate::trace::{self, good_neighbourhood, JordanReport, LevelCurve, Neighbourhood, TraceConfig};

/// A polynomial prepared for repeated level analysis: its neighbourhood
/// and polar half-branches do not depend on the level.
#[derive(Clone, Debug)]
pub struct Analyzer {
    pub f: Polynomial,
    pub nbhd: Neighbourhood,
    pub branches: Vec<HalfBranch>,
    pub cfg: TraceConfig,
    d: Derivatives,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelAnalysis {
    pub curve: LevelCurve,
    pub jordan: JordanReport,
    pub tangencies: Vec<TangencyPoint>,
    /// Rooted tree.
    pub tree: ReebTree,
    pub validation: ValidationReport,
    pub code: String,
}

impl Analyzer {
    /// Searches the configured radii for a good neighbourhood.
    pub fn new(f: &Polynomial, cfg: &TraceConfig) -> Result<Self> {
        let nbhd = good_neighbourhood(f, cfg)?;
        Self::with_neighbourhood(f, nbhd, cfg)
    }

    pub fn with_neighbourhood(f: &Polynomial, nbhd: Neighbourhood, cfg: &TraceConfig) -> Result<Self> {
        cfg.validate()?;
        let branches = polar::polar_half_branches(f, &nbhd, cfg)?;
        Ok(Analyzer { f: f.clone(), nbhd, branches, cfg: cfg.clone(), d: Derivatives::new(f) })
    }

    pub fn trace(&self, eps: f64) -> Result<LevelCurve> {
        trace::trace_with(&self.d, eps, &self.nbhd, &self.cfg)
    }

    pub fn analyze_level(&self, eps: f64) -> Result<LevelAnalysis> {
        self.analyze_level_with(eps, CodeOptions::default())
    }

    /// On an event mismatch the level is traced once more on a doubled grid
    /// before giving up.
    pub fn analyze_level_with(&self, eps: f64, opts: CodeOptions) -> Result<LevelAnalysis> {
        let first = self.analyze_on(eps, &self.cfg, opts);
        match first {
            Err(Error::EventMismatch { .. }) if self.cfg.grid_n <= 1 << 14 => {
                let finer = TraceConfig { grid_n: self.cfg.grid_n * 2, ..self.cfg.clone() };
                self.analyze_on(eps, &finer, opts)
            }
            other => other,
        }
    }

    fn analyze_on(&self, eps: f64, cfg: &TraceConfig, opts: CodeOptions) -> Result<LevelAnalysis> {
        let curve = trace::trace_with(&self.d, eps, &self.nbhd, cfg)?;
        let jordan = trace::verify_jordan(&curve);
        let tangencies = polar::vertical_tangencies_with_branches(&curve, &self.f, &self.branches, cfg)?;
        let tree = reeb::build_reeb(&self.f, &curve, &tangencies, cfg.tau_x)?;
        let tree = reeb::root_tree(&tree, &curve)?;
        let validation = reeb::validate_tree(&tree);
        let code = reeb::canonical_code(&tree, opts)?;
        Ok(LevelAnalysis { curve, jordan, tangencies, tree, validation, code })
    }
}

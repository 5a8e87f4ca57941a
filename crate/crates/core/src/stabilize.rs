//! Trees down a geometric ladder of levels, and their stabilisation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::Analyzer;
use crate::poly::Polynomial;
use crate::reeb::{self, CodeOptions, GeodesicReport, ReebTree};
use crate::trace::{TraceConfig, EPS_FLOOR};

/// Consecutive equal codes required before a tail counts as stable.
pub const STABILITY_WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonLadder {
    pub eps0: f64,
    pub ratio: f64,
    pub steps: usize,
    pub values: Vec<f64>,
}

impl EpsilonLadder {
    pub fn new(eps0: f64, ratio: f64, steps: usize) -> Result<Self> {
        if !(eps0 > 0.0 && eps0.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps0 must be positive, got {eps0}")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidArgument(format!("ratio must lie in (0, 1), got {ratio}")));
        }
        if steps < 2 {
            return Err(Error::InvalidArgument(format!("a ladder needs at least 2 steps, got {steps}")));
        }
        let values: Vec<f64> = (0..steps).map(|k| eps0 * ratio.powi(k as i32)).collect();
        let last = values[steps - 1];
        if last < EPS_FLOOR {
            return Err(Error::BelowNumericFloor { value: last, floor: EPS_FLOOR });
        }
        Ok(EpsilonLadder { eps0, ratio, steps, values })
    }

    /// Same range with twice the density: ratio `sqrt(ratio)`, `2 * steps - 1` levels.
    pub fn densified(&self) -> Result<Self> {
        EpsilonLadder::new(self.eps0, self.ratio.sqrt(), 2 * self.steps - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilisationResult {
    pub ladder: EpsilonLadder,
    /// Per level; `None` where the level failed or the ladder stopped.
    pub codes: Vec<Option<String>>,
    pub errors: Vec<Option<String>>,
    /// Levels past a numeric-floor failure are not used.
    pub terminated_at: Option<usize>,
    pub stable_from: Option<usize>,
    /// Rooted tree at the last level of the stable tail.
    pub asymptotic_tree: Option<ReebTree>,
    pub asymptotic_code: Option<String>,
    pub geodesics: Option<GeodesicReport>,
    pub monotone_geodesics: bool,
}

pub fn asymptotic_tree(f: &Polynomial, ladder: &EpsilonLadder, cfg: &TraceConfig) -> Result<StabilisationResult> {
    let analyzer = Analyzer::new(f, cfg)?;
    Ok(stabilise(&analyzer, ladder, CodeOptions::default()))
}

/// Levels are analysed in parallel; assembly is in ladder order.
pub fn stabilise(analyzer: &Analyzer, ladder: &EpsilonLadder, opts: CodeOptions) -> StabilisationResult {
    let levels: Vec<Result<(String, ReebTree)>> = ladder
        .values
        .par_iter()
        .map(|&eps| analyzer.analyze_level_with(eps, opts).map(|l| (l.code, l.tree)))
        .collect();
    let n = levels.len();
    let terminated_at = levels.iter().position(|l| matches!(l, Err(Error::BelowNumericFloor { .. })));
    let usable = terminated_at.unwrap_or(n);
    let mut codes = vec![None; n];
    let mut errors = vec![None; n];
    for (k, l) in levels.iter().enumerate() {
        match l {
            Ok((c, _)) if k < usable => codes[k] = Some(c.clone()),
            Ok(_) => {}
            Err(e) => errors[k] = Some(e.to_string()),
        }
    }
    let stable_from = stable_tail(&codes[..usable]);
    let (asymptotic_tree, asymptotic_code) = match stable_from {
        Some(_) => match &levels[usable - 1] {
            Ok((c, t)) => (Some(t.clone()), Some(c.clone())),
            Err(_) => (None, None),
        },
        None => (None, None),
    };
    let geodesics = asymptotic_tree.as_ref().and_then(|t| reeb::check_geodesic_monotonicity(t).ok());
    let monotone_geodesics = geodesics.as_ref().is_some_and(|g| g.monotone);
    StabilisationResult {
        ladder: ladder.clone(),
        codes,
        errors,
        terminated_at,
        stable_from,
        asymptotic_tree,
        asymptotic_code,
        geodesics,
        monotone_geodesics,
    }
}

/// Start of the longest run of equal successful codes reaching the end,
/// if it is at least [`STABILITY_WINDOW`] long.
pub fn stable_tail(codes: &[Option<String>]) -> Option<usize> {
    let last = codes.last()?.as_ref()?;
    let mut k = codes.len() - 1;
    while k > 0 && codes[k - 1].as_ref() == Some(last) {
        k -= 1;
    }
    (codes.len() - k >= STABILITY_WINDOW).then_some(k)
}

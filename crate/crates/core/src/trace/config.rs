use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical knobs shared by tracing, polar continuation and tree building.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Cells per side of the marching-squares grid.
    pub grid_n: usize,
    /// Number of grid doublings tried when a loop comes out non-simple.
    pub max_refine: u32,
    /// Residual bound `|f - eps| <= refine_tol * eps` for curve vertices.
    pub refine_tol: f64,
    /// Radii tried by the neighbourhood search, any order.
    pub nbhd_candidates: Vec<f64>,
    /// Polar residual bound, relative to the local gradient scale.
    pub branch_tol: f64,
    /// Tangencies closer than `merge_tol * radius` are merged.
    pub merge_tol: f64,
    /// Preorder tie band, relative to the radius.
    pub tau_x: f64,
    /// Convexity tolerance, relative to the curve diameter.
    pub hull_tol: f64,
    /// Angular samples on the polar seed circle.
    pub seed_samples: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            grid_n: 512,
            max_refine: 3,
            refine_tol: 1e-10,
            nbhd_candidates: vec![1.0, 0.75, 0.5, 0.25, 0.125, 0.0625],
            branch_tol: 1e-8,
            merge_tol: 1e-6,
            tau_x: 1e-6,
            hull_tol: 1e-7,
            seed_samples: 4096,
        }
    }
}

impl TraceConfig {
    /// Reads `key = value` lines; `#` starts a comment. Keys not mentioned
    /// keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = TraceConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|m| Error::InvalidArgument(format!("line {}: {m}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?} for {key}"))
        }
        match key {
            "grid_n" => self.grid_n = num(key, value)?,
            "max_refine" => self.max_refine = num(key, value)?,
            "refine_tol" => self.refine_tol = num(key, value)?,
            "nbhd_candidates" => {
                self.nbhd_candidates = value
                    .split(',')
                    .map(|s| num(key, s.trim()))
                    .collect::<std::result::Result<_, _>>()?
            }
            "branch_tol" => self.branch_tol = num(key, value)?,
            "merge_tol" => self.merge_tol = num(key, value)?,
            "tau_x" => self.tau_x = num(key, value)?,
            "hull_tol" => self.hull_tol = num(key, value)?,
            "seed_samples" => self.seed_samples = num(key, value)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.grid_n < 8 || self.grid_n > 1 << 16 {
            return bad("grid_n must lie in [8, 65536]");
        }
        if self.max_refine > 6 {
            return bad("max_refine must be at most 6");
        }
        if !(self.refine_tol > 0.0 && self.refine_tol < 1.0) {
            return bad("refine_tol must lie in (0, 1)");
        }
        if self.nbhd_candidates.is_empty() || self.nbhd_candidates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return bad("nbhd_candidates must be positive radii");
        }
        for (name, v) in [("branch_tol", self.branch_tol), ("merge_tol", self.merge_tol), ("tau_x", self.tau_x), ("hull_tol", self.hull_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidArgument(format!("{name} must lie in (0, 1)")));
            }
        }
        if self.seed_samples < 64 {
            return bad("seed_samples must be at least 64");
        }
        Ok(())
    }
}

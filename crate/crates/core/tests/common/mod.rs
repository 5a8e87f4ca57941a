#![allow(dead_code)]

pub mod gen;

use std::collections::VecDeque;

use curvetree::poly::{parse_polynomial, Polynomial};
use curvetree::reeb::ReebTree;
use curvetree::trace::TraceConfig;

pub const CIRCLE: &str = "x^2 + y^2";
pub const COSTE: &str = "x^2 + (y^2 - x)^2";
pub const PARABOLAS: &str = "x^16 + (y^2 + x)^2 (y^2 - x)^2";
pub const FORKS: &str = "x^6 + (y^4 + y^2 - x)^2 (y^2 - x)^2";
pub const CUBIC_FORK: &str = "x^2 + (x - y^3 - y^2)^2 (x - y^2)^2";
pub const ACNODE: &str = "y^2 - x^3 + x^2";
pub const P3: &str = "x^6 + (y^2 - x)^2";

pub fn poly(s: &str) -> Polynomial {
    parse_polynomial(s).unwrap()
}

/// `count` levels `eps0 * ratio^k`.
pub fn levels(eps0: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| eps0 * ratio.powi(k as i32)).collect()
}

/// Independent fiber oracle: samples `{f <= eps}` on a dense cell grid
/// over `window`, flood-fills (8-connected) the component containing the origin, and
/// counts its vertical runs in each column.
pub struct SweepOracle {
    pub xs: Vec<f64>,
    pub counts: Vec<usize>,
    /// The component reached the window frame, so the window was too small.
    pub touches_frame: bool,
}

impl SweepOracle {
    pub fn new(f: &Polynomial, eps: f64, window: [f64; 4], columns: usize, rows: usize) -> Self {
        let [x0, x1, y0, y1] = window;
        let dx = (x1 - x0) / columns as f64;
        let dy = (y1 - y0) / rows as f64;
        let xs: Vec<f64> = (0..columns).map(|i| x0 + (i as f64 + 0.5) * dx).collect();
        let ys: Vec<f64> = (0..rows).map(|j| y0 + (j as f64 + 0.5) * dy).collect();
        let inside: Vec<bool> = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| f.evaluate(x, y) <= eps))
            .collect();
        let idx = |i: usize, j: usize| i * rows + j;
        let ci = xs.iter().position(|&x| x + 0.5 * dx > 0.0).expect("window contains the origin");
        let cj = ys.iter().position(|&y| y + 0.5 * dy > 0.0).expect("window contains the origin");
        let seed = [(ci, cj), (ci.saturating_sub(1), cj), (ci, cj.saturating_sub(1))]
            .into_iter()
            .find(|&(i, j)| inside[idx(i, j)])
            .expect("origin cell inside the sublevel set");
        let mut reached = vec![false; columns * rows];
        let mut queue = VecDeque::from([seed]);
        reached[idx(seed.0, seed.1)] = true;
        let mut touches_frame = false;
        while let Some((i, j)) = queue.pop_front() {
            touches_frame |= i == 0 || j == 0 || i + 1 == columns || j + 1 == rows;
            let mut push = |a: usize, b: usize| {
                if inside[idx(a, b)] && !reached[idx(a, b)] {
                    reached[idx(a, b)] = true;
                    queue.push_back((a, b));
                }
            };
            // 8-connected: thin slanted arms still chain from column to column
            for a in i.saturating_sub(1)..=(i + 1).min(columns - 1) {
                for b in j.saturating_sub(1)..=(j + 1).min(rows - 1) {
                    push(a, b);
                }
            }
        }
        let counts = (0..columns)
            .map(|i| (0..rows).filter(|&j| reached[idx(i, j)] && (j == 0 || !reached[idx(i, j - 1)])).count())
            .collect();
        SweepOracle { xs, counts, touches_frame }
    }

    /// `(agreeing columns, mismatches as (x, oracle, tree))`.
    pub fn compare(&self, tree: &ReebTree) -> (usize, Vec<(f64, usize, usize)>) {
        let mut agree = 0;
        let mut bad = Vec::new();
        for (&x, &c) in self.xs.iter().zip(&self.counts) {
            let t = tree.band_count_at(x).unwrap_or(0);
            if t == c {
                agree += 1;
            } else {
                bad.push((x, c, t));
            }
        }
        (agree, bad)
    }
}

/// Oracle over a window that starts at the curve's bounding box joined with
/// the tree's abscissas and grows until the component clears the frame.
pub fn enclosing_oracle(f: &Polynomial, eps: f64, curve: &[(f64, f64)], tree: &ReebTree) -> SweepOracle {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in curve {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    for v in &tree.vertices {
        x0 = x0.min(v.x);
        x1 = x1.max(v.x);
    }
    let mut margin = 0.05;
    loop {
        let (mx, my) = (margin * (x1 - x0), margin * (y1 - y0));
        let o = SweepOracle::new(f, eps, [x0 - mx, x1 + mx, y0 - my, y1 + my], 1024, 4096);
        if !o.touches_frame || margin > 1.0 {
            return o;
        }
        margin *= 2.0;
    }
}

pub struct SuiteEntry {
    pub name: &'static str,
    pub poly: &'static str,
    pub cfg: TraceConfig,
    pub levels: Vec<f64>,
}

/// Every example with the levels at which its tree is checked. The cubic fork needs a
/// tie band far below the default: its split-to-tip gaps shrink like
/// `eps^2.5`.
pub fn suite() -> Vec<SuiteEntry> {
    let d = TraceConfig::default;
    vec![
        SuiteEntry { name: "circle", poly: CIRCLE, cfg: d(), levels: levels(0.1, 0.5, 10) },
        SuiteEntry { name: "coste", poly: COSTE, cfg: d(), levels: levels(0.1, 0.5, 10) },
        SuiteEntry { name: "parabolas", poly: PARABOLAS, cfg: d(), levels: levels(3.9e-4, 0.5, 10) },
        SuiteEntry { name: "forks", poly: FORKS, cfg: d(), levels: levels(0.025, 0.5, 10) },
        SuiteEntry {
            name: "cubic_fork",
            poly: CUBIC_FORK,
            cfg: TraceConfig { tau_x: 1e-12, nbhd_candidates: vec![0.5], ..d() },
            levels: levels(8e-4, 0.75, 9),
        },
        SuiteEntry { name: "acnode", poly: ACNODE, cfg: d(), levels: levels(0.1, 0.5, 10) },
        SuiteEntry { name: "p3", poly: P3, cfg: d(), levels: levels(0.025, 0.5, 8) },
    ]
}

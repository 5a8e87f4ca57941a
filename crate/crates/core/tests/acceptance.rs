//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! show up in `cargo test` output.

mod common;

use std::time::Instant;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use rayon::prelude::*;

use curvetree::pipeline::{Analyzer, LevelAnalysis};
use curvetree::polar::{distance_to_branches, polar_divisible_by_x};
use curvetree::poly::{parse_polynomial, sylvester_resultant, UniPolyOverPoly};
use curvetree::reeb::check_geodesic_monotonicity;
use curvetree::shape::{classify_minimum, convexity_defect, midpoint_witness, star_kernel, MinimumClass};
use curvetree::stabilize::{stabilise, EpsilonLadder};
use curvetree::trace::TraceConfig;

use common::gen::{brute_force_monotone, build, random_tree, rational, resultant_identity_holds, univariate};
use common::{enclosing_oracle, poly, suite};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel_close(p: (f64, f64), q: (f64, f64), rel: f64) -> bool {
    let scale = q.0.abs().max(q.1.abs());
    (p.0 - q.0).hypot(p.1 - q.1) <= rel * scale
}

/// Coste's crescent: tangencies, exterior midpoint, non-convexity, runtime.
fn coste_non_convexity() -> Outcome {
    let f = poly(common::COSTE);
    let mut notes = Vec::new();
    let mut pass = true;
    for eps in [0.1, 0.01, 1e-4] {
        let t0 = Instant::now();
        let run = || -> curvetree::Result<(LevelAnalysis, curvetree::shape::ConvexityReport)> {
            let a = Analyzer::new(&f, &TraceConfig::default())?;
            let l = a.analyze_level(eps)?;
            let c = convexity_defect(&f, &l.curve, &l.tree, a.cfg.hull_tol);
            Ok((l, c))
        };
        let (l, conv) = match run() {
            Ok(r) => r,
            Err(e) => {
                notes.push(format!("eps={eps:e}: {e}"));
                pass = false;
                continue;
            }
        };
        let secs = t0.elapsed().as_secs_f64();
        let (s, q) = (eps.sqrt(), eps.powf(0.25));
        let expected = [((-(eps / 2.0).sqrt()), 0.0), ((eps / 2.0).sqrt(), 0.0), (s, q), (s, -q)];
        let found = expected.iter().all(|&e| l.tangencies.iter().any(|t| rel_close(t.position, e, 1e-6)));
        let exact_q = midpoint_witness(&f, eps, (s, q), (s, -q));
        let q_ok = exact_q.exits && ((exact_q.excess + eps) / (2.0 * eps) - 1.0).abs() < 1e-9;
        let witness_ok = conv.witness.as_ref().is_some_and(|w| w.exits && rel_close(w.m, (s, 0.0), 1e-6));
        let ok = found && l.tangencies.len() == 4 && q_ok && witness_ok && !conv.is_convex && secs < 5.0;
        pass &= ok;
        notes.push(format!(
            "eps={eps:e}: tangencies {} ({}), f(Q)-eps={:.3e}, witness {}, convex={}, {secs:.2}s",
            l.tangencies.len(),
            if found { "at expected points" } else { "MISSING expected points" },
            exact_q.excess,
            if witness_ok { "at (sqrt eps, 0)" } else { "off" },
            conv.is_convex
        ));
    }
    outcome(pass, notes.join("; "))
}

/// Positive definite Hessian: convex small levels.
fn morse_convexity() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for src in ["x^2 + y^2", "3x^2 + 5y^2 + x^3 y", "x^2 + 2y^2 - x^4"] {
        let f = poly(src);
        let class = classify_minimum(&f);
        let mut worst: f64 = 0.0;
        let mut ok = class == Ok(MinimumClass::MorseConvex);
        match Analyzer::new(&f, &TraceConfig::default()) {
            Ok(a) => {
                for eps in common::levels(0.01, 0.5, 8) {
                    match a.analyze_level(eps) {
                        Ok(l) => {
                            let c = convexity_defect(&f, &l.curve, &l.tree, a.cfg.hull_tol);
                            let diam = curvetree::geometry::diameter_bound(&l.curve.points);
                            worst = worst.max(c.defect / diam);
                            ok &= c.is_convex && c.defect <= 1e-7 * diam;
                        }
                        Err(e) => {
                            ok = false;
                            notes.push(format!("{src} eps={eps:e}: {e}"));
                        }
                    }
                }
            }
            Err(e) => {
                ok = false;
                notes.push(format!("{src}: {e}"));
            }
        }
        pass &= ok;
        notes.push(format!("{src}: {:?}, max defect/diameter {worst:.2e}", class.ok()));
    }
    outcome(pass, notes.join("; "))
}

struct SuiteRun {
    pairs: usize,
    failures: Vec<String>,
    structure_violations: Vec<String>,
    oracle_failures: Vec<String>,
    worst_oracle: f64,
    tangency_worst: f64,
    tangency_failures: Vec<String>,
    divisible: Vec<&'static str>,
}

/// One pass over the example suite shared by the structure, oracle and
/// polar criteria.
fn run_suite() -> SuiteRun {
    let mut r = SuiteRun {
        pairs: 0,
        failures: Vec::new(),
        structure_violations: Vec::new(),
        oracle_failures: Vec::new(),
        worst_oracle: 1.0,
        tangency_worst: 0.0,
        tangency_failures: Vec::new(),
        divisible: Vec::new(),
    };
    for entry in suite() {
        let f = poly(entry.poly);
        if polar_divisible_by_x(&f) {
            r.divisible.push(entry.name);
        }
        let a = match Analyzer::new(&f, &entry.cfg) {
            Ok(a) => a,
            Err(e) => {
                r.failures.push(format!("{}: {e}", entry.name));
                continue;
            }
        };
        let rows: Vec<_> = entry
            .levels
            .par_iter()
            .map(|&eps| {
                let l = a.analyze_level(eps)?;
                let oracle = enclosing_oracle(&f, eps, &l.curve.points, &l.tree);
                let (agree, _) = oracle.compare(&l.tree);
                let frac = agree as f64 / oracle.xs.len() as f64;
                let dist = l.tangencies.iter().map(|t| distance_to_branches(t.position, &a.branches)).fold(0.0, f64::max);
                Ok::<_, curvetree::Error>((eps, l.validation.clone(), frac, oracle.touches_frame, dist))
            })
            .collect();
        for (row, &eps) in rows.into_iter().zip(&entry.levels) {
            r.pairs += 1;
            match row {
                Err(e) => r.failures.push(format!("{} eps={eps:e}: {e}", entry.name)),
                Ok((eps, v, frac, framed, dist)) => {
                    if !(v.connected && v.euler_characteristic == 1 && v.transverse && v.planar && v.passed) {
                        r.structure_violations.push(format!("{} eps={eps:e}: {v:?}", entry.name));
                    }
                    r.worst_oracle = r.worst_oracle.min(frac);
                    if frac < 0.99 || framed {
                        r.oracle_failures.push(format!("{} eps={eps:e}: {:.1}%", entry.name, 100.0 * frac));
                    }
                    r.tangency_worst = r.tangency_worst.max(dist);
                    if dist > 1e-6 {
                        r.tangency_failures.push(format!("{} eps={eps:e}: {dist:.2e}", entry.name));
                    }
                }
            }
        }
    }
    r
}

fn tree_structure(s: &SuiteRun) -> Outcome {
    let pass = s.pairs >= 60 && s.failures.is_empty() && s.structure_violations.is_empty();
    let mut detail = format!("{} (f, eps) pairs, {} failed to build, {} violations", s.pairs, s.failures.len(), s.structure_violations.len());
    for m in s.failures.iter().chain(&s.structure_violations).take(3) {
        detail += &format!("; {m}");
    }
    outcome(pass, detail)
}

fn oracle_equivalence(s: &SuiteRun) -> Outcome {
    let pass = s.failures.is_empty() && s.oracle_failures.is_empty();
    let mut detail = format!(
        "{} pairs x 1024 columns, worst agreement {:.2}% (need 99%), {} pairs below",
        s.pairs - s.failures.len(),
        100.0 * s.worst_oracle,
        s.oracle_failures.len()
    );
    for m in s.oracle_failures.iter().take(3) {
        detail += &format!("; {m}");
    }
    outcome(pass, detail)
}

/// Degenerate minimum whose small levels are not star-shaped.
fn star_failure() -> Outcome {
    let f = poly(common::P3);
    let mut pass = true;
    let mut notes = Vec::new();
    let a = match Analyzer::new(&f, &TraceConfig::default()) {
        Ok(a) => a,
        Err(e) => return outcome(false, format!("neighbourhood: {e}")),
    };
    for eps in [1e-4, 1e-6] {
        let star = match a.trace(eps) {
            Ok(c) => star_kernel(&c, f.is_even_in_y()),
            Err(e) => {
                pass = false;
                notes.push(format!("eps={eps:e}: {e}"));
                continue;
            }
        };
        let w = midpoint_witness(&f, eps, (eps.powf(1.0 / 6.0), eps.powf(1.0 / 12.0)), (0.0, 0.0));
        pass &= !star.is_star && star.kernel.is_empty() && w.exits;
        notes.push(format!("eps={eps:e}: is_star={}, kernel vertices {}, f(M)-eps={:.3e} (exact sign {})", star.is_star, star.kernel.len(), w.excess, if w.exits { "+" } else { "-" }));
    }
    outcome(pass, notes.join("; "))
}

/// Codes settle down a ladder, survive a grid doubling, and have monotone
/// geodesics; Coste settles on the Y.
fn stabilisation() -> Outcome {
    let cases = [("coste", common::COSTE, 0.1), ("parabolas", common::PARABOLAS, 3.9e-4), ("forks", common::FORKS, 0.025)];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, src, eps0) in cases {
        let f = poly(src);
        let ladder = EpsilonLadder::new(eps0, 0.5, 8).expect("ladder above the floor");
        let mut codes_by_grid = Vec::new();
        let mut ok = true;
        for grid_n in [512, 1024] {
            let cfg = TraceConfig { grid_n, ..TraceConfig::default() };
            let a = match Analyzer::new(&f, &cfg) {
                Ok(a) => a,
                Err(e) => {
                    ok = false;
                    notes.push(format!("{name} grid {grid_n}: {e}"));
                    continue;
                }
            };
            let s = stabilise(&a, &ladder, Default::default());
            let tail = &s.codes[3..];
            let constant = tail.iter().all(|c| c.is_some() && *c == tail[0]);
            ok &= constant && s.monotone_geodesics;
            if grid_n == 512 {
                if let Some(t) = &s.asymptotic_tree {
                    let g = check_geodesic_monotonicity(t).map(|g| g.monotone).unwrap_or(false);
                    ok &= g;
                    if name == "coste" {
                        let c = convexity_defect(&f, &a.trace(*ladder.values.last().unwrap()).unwrap(), t, cfg.hull_tol);
                        let y = c.reeb_vertex_count == 4 && !c.tree_is_path;
                        ok &= y;
                        notes.push(format!("coste unrooted tree: {} vertices, {} edges", c.reeb_vertex_count, c.reeb_vertex_count - 1));
                    }
                }
            }
            codes_by_grid.push(s.asymptotic_code.clone());
            if !constant {
                notes.push(format!("{name} grid {grid_n}: codes {:?}", s.codes));
            }
        }
        let same = codes_by_grid.len() == 2 && codes_by_grid[0].is_some() && codes_by_grid[0] == codes_by_grid[1];
        ok &= same;
        pass &= ok;
        notes.push(format!(
            "{name}: last 5 of 8 levels constant, code {} (grid 1024 {})",
            codes_by_grid.first().cloned().flatten().unwrap_or_else(|| "-".into()),
            if same { "same" } else { "DIFFERENT" }
        ));
    }
    outcome(pass, notes.join("; "))
}

/// Random plane trees against a brute-force walk over every geodesic.
fn no_spiralling() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = random_tree();
    let (mut agree, mut flagged) = (0, 0);
    for _ in 0..500 {
        let t = strategy.new_tree(&mut runner).expect("tree").current();
        let report = check_geodesic_monotonicity(&build(&t)).expect("rooted");
        let (ok, leaves) = brute_force_monotone(&t);
        if report.monotone == ok && report.geodesics_checked == leaves && report.violation.is_some() == !ok {
            agree += 1;
        }
        flagged += usize::from(!report.monotone);
    }
    outcome(agree == 500, format!("{agree}/500 trees agree with the brute-force walker ({flagged} non-monotone)"))
}

fn resultant() -> Outcome {
    let p = |s: &str| parse_polynomial(s).unwrap();
    let g = UniPolyOverPoly::parametrisation(p("x"), &[p("0"), p("0"), p("1"), p("1")]).unwrap();
    let h = UniPolyOverPoly::parametrisation(p("y"), &[p("0"), p("1")]).unwrap();
    let r = sylvester_resultant(&g, &h).unwrap();
    let exact = r == p("x - y^3 - y^2");
    let mut runner = TestRunner::deterministic();
    let strategy = (univariate(3), univariate(2), rational());
    let ok = (0..100)
        .filter(|_| {
            let (a, b, s) = strategy.new_tree(&mut runner).expect("case").current();
            resultant_identity_holds(&a, &b, &s)
        })
        .count();
    outcome(exact && ok == 100, format!("Res = {r} ({}), {ok}/100 random eliminations vanish", if exact { "exact" } else { "WRONG" }))
}

fn polar_consistency(s: &SuiteRun) -> Outcome {
    let pass = s.divisible.is_empty() && s.failures.is_empty() && s.tangency_failures.is_empty();
    let mut detail = format!(
        "polar divisible by x for {:?}; max tangency distance to a traced branch {:.2e} (need 1e-6)",
        s.divisible, s.tangency_worst
    );
    for m in s.tangency_failures.iter().take(3) {
        detail += &format!("; {m}");
    }
    outcome(pass, detail)
}

fn main() {
    let t0 = Instant::now();
    let suite_run = run_suite();
    let results = [
        (1, "Coste non-convexity", coste_non_convexity()),
        (2, "Morse convexity", morse_convexity()),
        (3, "tree structure", tree_structure(&suite_run)),
        (4, "oracle equivalence", oracle_equivalence(&suite_run)),
        (5, "star-domain failure", star_failure()),
        (6, "stabilisation", stabilisation()),
        (7, "no spiralling", no_spiralling()),
        (8, "resultant", resultant()),
        (9, "polar consistency", polar_consistency(&suite_run)),
    ];
    let mut failed = 0;
    for (k, name, o) in &results {
        println!("criterion {k} ({name}): {} -- {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} criteria pass ({:.1}s)", results.len() - failed, results.len(), t0.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

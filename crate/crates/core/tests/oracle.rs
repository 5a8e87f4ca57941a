mod common;

use curvetree::pipeline::Analyzer;
use rayon::prelude::*;

use common::{enclosing_oracle, poly, suite};

#[test]
fn band_counts_match_grid_sweep_oracle() {
    for entry in suite() {
        let f = poly(entry.poly);
        let a = Analyzer::new(&f, &entry.cfg).unwrap();
        let rows: Vec<String> = entry
            .levels
            .par_iter()
            .map(|&eps| {
                let l = a.analyze_level(eps).unwrap_or_else(|e| panic!("{} eps={eps:e}: {e}", entry.name));
                let oracle = enclosing_oracle(&f, eps, &l.curve.points, &l.tree);
                assert!(!oracle.touches_frame, "{} eps={eps:e}: window too small", entry.name);
                let (agree, bad) = oracle.compare(&l.tree);
                assert!(
                    agree as f64 >= 0.99 * oracle.xs.len() as f64,
                    "{} eps={eps:e}: {agree}/1024 columns agree; first mismatches {:?}",
                    entry.name,
                    &bad[..bad.len().min(8)]
                );
                format!("{} eps={eps:.3e} agree={agree}/1024", entry.name)
            })
            .collect();
        for r in rows {
            println!("{r}");
        }
    }
}

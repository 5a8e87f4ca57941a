use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use curvetree::io::{self, AnalyzeReport, RunManifest, SvgInput};
use curvetree::pipeline::Analyzer;
use curvetree::poly::{parse_polynomial, Polynomial};
use curvetree::polar::{self, HalfBranch};
use curvetree::shape;
use curvetree::stabilize::{self, EpsilonLadder};
use curvetree::trace::TraceConfig;
use curvetree::Error;

#[derive(Parser)]
#[command(name = "curvetree", version, about = "Poincaré-Reeb trees of small level curves around a strict local minimum")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace one level, build and classify its tree; writes tree.json and report.json.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
    },
    /// Follow the tree down a ladder of levels; writes stabilisation.json.
    Stabilize {
        #[command(flatten)]
        common: Common,
        #[arg(long = "eps-start", default_value_t = 0.1)]
        eps_start: f64,
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Draw the curve, polar branches and tree of one level; writes level.svg.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
    },
    /// Polar half-branches of the neighbourhood; writes polar.json.
    Polar {
        #[command(flatten)]
        common: Common,
    },
    /// Star-domain kernel of one level; writes kernel.json.
    Kernel {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Args)]
struct Common {
    /// Polynomial in x and y, e.g. "x^2 + (y^2 - x)^2".
    #[arg(long)]
    poly: String,
    /// Cells per side of the tracing grid.
    #[arg(long)]
    grid: Option<usize>,
    /// Use this neighbourhood radius (still checked) instead of the candidate ladder.
    #[arg(long)]
    nbhd: Option<f64>,
    /// key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also print the main result as JSON on standard output.
    #[arg(long)]
    json: bool,
    /// Also write an SVG drawing.
    #[arg(long)]
    svg: bool,
}

struct Run {
    f: Polynomial,
    cfg: TraceConfig,
    manifest: RunManifest,
    out: PathBuf,
    json: bool,
    svg: bool,
}

impl Run {
    fn new(command: &str, c: &Common) -> Result<Self, Error> {
        let f = parse_polynomial(&c.poly)?;
        let mut cfg = match &c.config {
            Some(p) => TraceConfig::from_file(p)?,
            None => TraceConfig::default(),
        };
        if let Some(g) = c.grid {
            cfg.grid_n = g;
        }
        if let Some(r) = c.nbhd {
            cfg.nbhd_candidates = vec![r];
        }
        cfg.validate()?;
        let manifest = RunManifest::new(command, &c.poly, &cfg);
        Ok(Run { f, cfg, manifest, out: c.out.clone(), json: c.json, svg: c.svg })
    }

    fn write<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Error> {
        io::write_json(&self.out.join(name), value)?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    fn write_svg(&mut self, name: &str, input: &SvgInput<'_>) -> Result<(), Error> {
        io::write_atomic(&self.out.join(name), io::svg_document(input)?.as_bytes())?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    fn finish<T: Serialize>(mut self, stdout: &T) -> Result<(), Error> {
        self.manifest.outputs.push("manifest.json".into());
        io::write_json(&self.out.join("manifest.json"), &self.manifest)?;
        if self.json {
            print!("{}", io::to_json(stdout)?);
        }
        Ok(())
    }
}

fn check_eps(eps: f64) -> Result<(), Error> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("--eps must be positive, got {eps}")))
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze { common, eps } => {
            check_eps(eps)?;
            let mut run = Run::new("analyze", &common)?;
            let a = Analyzer::new(&run.f, &run.cfg)?;
            let l = a.analyze_level(eps)?;
            let report = AnalyzeReport::new(&a, &l);
            run.write("tree.json", &io::tree_to_json(&l.tree))?;
            run.write("report.json", &report)?;
            if run.svg {
                let input = SvgInput { radius: a.nbhd.radius, curve: Some(&l.curve), branches: &a.branches, tree: Some(&l.tree) };
                run.write_svg("level.svg", &input)?;
            }
            eprintln!("code {}  convex {}  vertices {}", report.code, report.is_convex, l.tree.vertices.len());
            run.finish(&report)
        }
        Command::Stabilize { common, eps_start, ratio, steps } => {
            let ladder = EpsilonLadder::new(eps_start, ratio, steps)?;
            let mut run = Run::new("stabilize", &common)?;
            let result = stabilize::asymptotic_tree(&run.f, &ladder, &run.cfg)?;
            run.write("stabilisation.json", &result)?;
            if let Some(t) = &result.asymptotic_tree {
                run.write("tree.json", &io::tree_to_json(t))?;
            }
            eprintln!(
                "stable from {:?}  code {}  monotone geodesics {}",
                result.stable_from,
                result.asymptotic_code.as_deref().unwrap_or("-"),
                result.monotone_geodesics
            );
            run.finish(&result)
        }
        Command::Render { common, eps } => {
            check_eps(eps)?;
            let mut run = Run::new("render", &common)?;
            let a = Analyzer::new(&run.f, &run.cfg)?;
            let l = a.analyze_level(eps)?;
            let input = SvgInput { radius: a.nbhd.radius, curve: Some(&l.curve), branches: &a.branches, tree: Some(&l.tree) };
            run.write_svg("level.svg", &input)?;
            run.finish(&io::tree_to_json(&l.tree))
        }
        Command::Polar { common } => {
            let mut run = Run::new("polar", &common)?;
            let a = Analyzer::new(&run.f, &run.cfg)?;
            let report = PolarReport {
                polar_curve: polar::polar_curve(&run.f)?.to_string(),
                divisible_by_x: polar::polar_divisible_by_x(&run.f),
                radius: a.nbhd.radius,
                branches: a.branches.clone(),
            };
            run.write("polar.json", &report)?;
            if run.svg {
                run.write_svg("polar.svg", &SvgInput { radius: a.nbhd.radius, curve: None, branches: &a.branches, tree: None })?;
            }
            eprintln!("{} half-branches in radius {}", a.branches.len(), a.nbhd.radius);
            run.finish(&report)
        }
        Command::Kernel { common, eps } => {
            check_eps(eps)?;
            let mut run = Run::new("kernel", &common)?;
            let a = Analyzer::new(&run.f, &run.cfg)?;
            let curve = a.trace(eps)?;
            let report = shape::star_kernel(&curve, run.f.is_even_in_y());
            run.write("kernel.json", &report)?;
            eprintln!("star {}  kernel vertices {}", report.is_star, report.kernel.len());
            run.finish(&report)
        }
    }
}

#[derive(Serialize)]
struct PolarReport {
    polar_curve: String,
    divisible_by_x: bool,
    radius: f64,
    branches: Vec<HalfBranch>,
}

fn set_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("CURVETREE_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("CURVETREE_THREADS must be a positive integer, got {v:?}")))?;
    // a second initialisation only happens in-process, where it is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match set_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 1 } else { 2 })
        }
    }
}

//! Command-line driver: body I/O, measure and ratio computations,
//! verification suites, and parameter sweeps emitting CSV plot data.
//!
//! Exit codes: 0 success, 1 verification violations, 2 parse/config errors,
//! 3 engine/representation mismatch.

mod spec;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use dualcurve::geometry::{ConvexBody, NormalSelection};
use dualcurve::lab::{self, run_suite, suite_names, tightness_factor_probe};
use dualcurve::measures::{
    dual_curvature, subspace_concentration_ratio, EngineChoice, MeasureConfig, MeasureError,
};
use dualcurve::quadrature::RngSeed;
use dualcurve::{Subspace, Vector};

use spec::{BodySpec, SubspaceSpec};

#[derive(Parser)]
#[command(
    name = "dualcurve",
    about = "Dual curvature measures, cone-volume measures and subspace concentration ratios of origin-symmetric convex bodies",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute C̃_q(K, η) for a body read from a JSON file.
    Measure(MeasureArgs),
    /// Compute the subspace concentration ratio with its bound.
    Ratio(RatioArgs),
    /// Run a verification suite; exits 1 on any violation.
    Verify(VerifyArgs),
    /// Sweep a body family and emit CSV plot data.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct EngineArgs {
    /// Engine: auto | facet | body-mc | sphere-mc | closed.
    #[arg(long, default_value = "auto")]
    engine: String,
    /// Monte Carlo sample budget.
    #[arg(long, default_value_t = 200_000)]
    samples: u64,
    /// RNG seed (default: env DUALCURVE_SEED, else 24333).
    #[arg(long)]
    seed: Option<u64>,
}

impl EngineArgs {
    fn config(&self) -> Result<MeasureConfig, String> {
        let engine: EngineChoice = self.engine.parse()?;
        Ok(MeasureConfig::default()
            .with_engine(engine)
            .with_samples(self.samples)
            .with_seed(RngSeed::new(resolve_seed(self.seed)?)))
    }
}

#[derive(Args)]
struct MeasureArgs {
    /// Body specification file (JSON).
    #[arg(long)]
    body: PathBuf,
    /// Measure order q.
    #[arg(long)]
    q: f64,
    /// Selection: all | facets:i,j,… | subspace:FILE.
    #[arg(long, default_value = "all")]
    eta: String,
    #[command(flatten)]
    engine: EngineArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RatioArgs {
    #[arg(long)]
    body: PathBuf,
    /// Subspace file (JSON with a "basis" array).
    #[arg(long, conflicts_with = "axes")]
    subspace: Option<PathBuf>,
    /// Coordinate axes spanning L, 1-based (e.g. "1,2").
    #[arg(long)]
    axes: Option<String>,
    #[arg(long)]
    q: f64,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or "all".
    #[arg(long)]
    suite: String,
    /// Trial budget (default: each suite's acceptance budget).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample budget for the measure engines.
    #[arg(long, default_value_t = 200_000)]
    samples: u64,
    /// Write a JSONL per-suite report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Family: cylinder | tightness.
    #[arg(long)]
    family: String,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Grid for l, e.g. "geomspace(1,1000,13)".
    #[arg(long)]
    l_grid: Option<String>,
    /// Moment order p (tightness family).
    #[arg(long)]
    p: Option<f64>,
    /// Combination weight λ (tightness family).
    #[arg(long)]
    lambda: Option<f64>,
    /// Grid for ρ, e.g. "geomspace(10,1000,7)".
    #[arg(long)]
    rho_grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunReport {
    schema: &'static str,
    command: String,
    argv: Vec<String>,
    config: serde_json::Value,
    results: serde_json::Value,
    wall_time_s: f64,
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("DUALCURVE_SEED") {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| format!("DUALCURVE_SEED must be an unsigned integer, got {text:?}")),
        Err(_) => Ok(24333),
    }
}

fn read_body(path: &PathBuf) -> Result<(BodySpec, ConvexBody), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec: BodySpec =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let body = spec
        .to_body()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((spec, body))
}

fn read_subspace(path: &PathBuf) -> Result<Subspace, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec: SubspaceSpec =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    spec.to_subspace()
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_eta(text: &str, body: &ConvexBody) -> Result<NormalSelection, String> {
    if text == "all" {
        return Ok(NormalSelection::FullSphere);
    }
    if let Some(list) = text.strip_prefix("facets:") {
        let ids: Result<Vec<usize>, _> = list.split(',').map(|s| s.trim().parse()).collect();
        return Ok(NormalSelection::FacetSubset(
            ids.map_err(|e| format!("facet list: {e}"))?,
        ));
    }
    if let Some(path) = text.strip_prefix("subspace:") {
        let l = read_subspace(&PathBuf::from(path))?;
        if l.ambient_dim() != body.dim() {
            return Err(format!(
                "subspace lives in ℝ^{} but the body in ℝ^{}",
                l.ambient_dim(),
                body.dim()
            ));
        }
        return Ok(NormalSelection::SubspaceCap(l));
    }
    Err(format!(
        "cannot parse η {text:?}; expected all | facets:i,j,… | subspace:FILE"
    ))
}

fn parse_axes(text: &str, n: usize) -> Result<Subspace, String> {
    let ids: Result<Vec<usize>, _> = text.split(',').map(|s| s.trim().parse::<usize>()).collect();
    let ids = ids.map_err(|e| format!("axes: {e}"))?;
    if ids.iter().any(|&a| a == 0 || a > n) {
        return Err(format!("axes must lie in 1..={n}"));
    }
    let zero_based: Vec<usize> = ids.iter().map(|a| a - 1).collect();
    Subspace::coordinate(n, &zero_based).map_err(|e| format!("axes: {e}"))
}

/// "geomspace(a,b,m)" → geometric grid.
fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let inner = text
        .trim()
        .strip_prefix("geomspace(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| format!("expected geomspace(a,b,m), got {text:?}"))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected geomspace(a,b,m), got {text:?}"));
    }
    let a: f64 = parts[0].parse().map_err(|e| format!("grid start: {e}"))?;
    let b: f64 = parts[1].parse().map_err(|e| format!("grid end: {e}"))?;
    let m: usize = parts[2].parse().map_err(|e| format!("grid count: {e}"))?;
    if !(a > 0.0 && b > 0.0 && m >= 2) {
        return Err("geomspace needs positive endpoints and m ≥ 2".into());
    }
    Ok((0..m)
        .map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (m - 1) as f64).exp())
        .collect())
}

fn emit_report(report: &RunReport, out: &Option<PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_text(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// 17 significant digits, enough for exact f64 round trips in CSV cells.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

enum CliError {
    Config(String),
    Engine(String),
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        use dualcurve::geometry::GeometryError;
        match e {
            MeasureError::EngineMismatch(_)
            | MeasureError::NonPositiveQ(_)
            | MeasureError::Geometry(GeometryError::UnsupportedRepresentation(_)) => {
                CliError::Engine(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

fn cmd_measure(args: &MeasureArgs, argv: Vec<String>) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (spec, body) = read_body(&args.body).map_err(CliError::Config)?;
    let cfg = args.engine.config().map_err(CliError::Config)?;
    let eta = parse_eta(&args.eta, &body).map_err(CliError::Config)?;
    let estimate = dual_curvature(&body, &eta, args.q, &cfg)?;
    let report = RunReport {
        schema: "dualcurve-report/1",
        command: "measure".into(),
        argv,
        config: json!({
            "body": spec,
            "q": args.q,
            "eta": args.eta,
            "engine": args.engine.engine,
            "samples": cfg.samples,
            "seed": cfg.seed,
        }),
        results: serde_json::to_value(vec![&estimate]).unwrap(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    emit_report(&report, &args.out).map_err(CliError::Config)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_ratio(args: &RatioArgs, argv: Vec<String>) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (spec, body) = read_body(&args.body).map_err(CliError::Config)?;
    let cfg = args.engine.config().map_err(CliError::Config)?;
    let l = match (&args.subspace, &args.axes) {
        (Some(path), None) => read_subspace(path).map_err(CliError::Config)?,
        (None, Some(axes)) => parse_axes(axes, body.dim()).map_err(CliError::Config)?,
        _ => {
            return Err(CliError::Config(
                "exactly one of --subspace or --axes is required".into(),
            ))
        }
    };
    if l.ambient_dim() != body.dim() {
        return Err(CliError::Config(format!(
            "subspace lives in ℝ^{} but the body in ℝ^{}",
            l.ambient_dim(),
            body.dim()
        )));
    }
    let ratio = subspace_concentration_ratio(&body, &l, args.q, &cfg)?;
    let basis: Vec<Vec<f64>> = l.basis().iter().map(|b| b.to_vec()).collect();
    let report = RunReport {
        schema: "dualcurve-report/1",
        command: "ratio".into(),
        argv,
        config: json!({
            "body": spec,
            "q": args.q,
            "subspace_basis": basis,
            "engine": args.engine.engine,
            "samples": cfg.samples,
            "seed": cfg.seed,
        }),
        results: serde_json::to_value(vec![&ratio]).unwrap(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    emit_report(&report, &args.out).map_err(CliError::Config)?;
    Ok(ExitCode::SUCCESS)
}

fn default_trials(suite: &str) -> u64 {
    match suite {
        "karamata" => 10_000,
        "scalar-lemma" => 100_000,
        "alesker" => 20,
        "moment-bm" => 10_000,
        "corollary" => 2_000,
        "small-p" => 40,
        "anderson" => 2_000,
        "prism" => 1_000,
        "parallelotope" => 10_000,
        "planar" => 10_000,
        "subspace" => 10_000,
        "cylinder" => 13,
        "bm" => 30,
        _ => 1_000,
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let seed = RngSeed::new(resolve_seed(args.seed).map_err(CliError::Config)?);
    let cfg = MeasureConfig::default()
        .with_samples(args.samples)
        .with_seed(seed);
    let names: Vec<&str> = if args.suite == "all" {
        suite_names().to_vec()
    } else if suite_names().contains(&args.suite.as_str()) {
        vec![args.suite.as_str()]
    } else {
        return Err(CliError::Config(format!(
            "unknown suite {:?}; available: {} or all",
            args.suite,
            suite_names().join(", ")
        )));
    };

    let mut any_violation = false;
    let mut jsonl = String::new();
    for name in names {
        let trials = args.trials.unwrap_or_else(|| default_trials(name));
        let summary =
            run_suite(name, trials, seed, &cfg).map_err(|e| CliError::Config(e.to_string()))?;
        println!(
            "suite {name}: {} — {} trials, {} checks, worst margin {:.3e}",
            if summary.passed() { "PASS" } else { "FAIL" },
            summary.trials,
            summary.checks,
            summary.worst_margin
        );
        for note in &summary.notes {
            println!("  note: {note}");
        }
        for v in &summary.violations {
            any_violation = true;
            println!(
                "  VIOLATION trial {} (seed {}, stream {}): {} margin {:.6e}",
                v.trial, v.seed.seed, v.seed.stream, v.description, v.margin
            );
        }
        jsonl.push_str(
            &serde_json::to_string(&summary).map_err(|e| CliError::Config(e.to_string()))?,
        );
        jsonl.push('\n');
    }
    if let Some(path) = &args.report {
        fs::write(path, jsonl).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    }
    Ok(if any_violation {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode, CliError> {
    let cfg = MeasureConfig::default();
    let mut csv = String::from("parameter,subspace_measure,total_measure,ratio,bound,margin\n");
    match args.family.as_str() {
        "cylinder" => {
            let q = args.q.ok_or(CliError::Config("--q required".into()))?;
            let n = args.n.ok_or(CliError::Config("--n required".into()))?;
            let k = args.k.ok_or(CliError::Config("--k required".into()))?;
            let grid_text = args
                .l_grid
                .as_ref()
                .ok_or(CliError::Config("--l-grid required".into()))?;
            let grid = parse_grid(grid_text).map_err(CliError::Config)?;
            let sweep = lab::cylinder_asymptotics_check(q, n, k, &grid, &cfg)
                .map_err(|e| CliError::Config(e.to_string()))?;
            for row in &sweep.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt17(row.l),
                    fmt17(row.subspace_measure),
                    fmt17(row.total_measure),
                    fmt17(row.ratio),
                    fmt17(row.bound),
                    fmt17(row.margin)
                ));
            }
        }
        "tightness" => {
            let p = args.p.ok_or(CliError::Config("--p required".into()))?;
            let lambda = args
                .lambda
                .ok_or(CliError::Config("--lambda required".into()))?;
            let grid_text = args
                .rho_grid
                .as_ref()
                .ok_or(CliError::Config("--rho-grid required".into()))?;
            let grid = parse_grid(grid_text).map_err(CliError::Config)?;
            // C = [−1,1]·e₁ ⊂ ℝ², shifted by ρ·e₁; the ratio approaches the
            // sharpness bound |2λ−1|^p.
            let c = dualcurve::geometry::Hull::new(vec![
                Vector::from_slice(&[-1.0, 0.0]).unwrap(),
                Vector::from_slice(&[1.0, 0.0]).unwrap(),
            ])
            .map_err(|e| CliError::Config(e.to_string()))?;
            let bound = (2.0 * lambda - 1.0f64).abs().powf(p);
            for &rho in &grid {
                let ratio = tightness_factor_probe(&c, &[1.0, 0.0], rho, lambda, p, &cfg)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt17(rho),
                    fmt17(f64::NAN),
                    fmt17(f64::NAN),
                    fmt17(ratio),
                    fmt17(bound),
                    fmt17(ratio - bound)
                ));
            }
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown family {other:?}; expected cylinder | tightness"
            )))
        }
    }
    emit_text(&csv, &args.out).map_err(CliError::Config)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Measure(args) => cmd_measure(args, argv),
        Command::Ratio(args) => cmd_ratio(args, argv),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Engine(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

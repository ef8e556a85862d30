//! The `scjl` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 an experiment verdict
//! failed, 3 an enumeration budget was exceeded.

mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use output::{Format, Report};

use crate::bounds::calibration::GRID_SEED;
use crate::counterexample::{compare_dimensions, CounterexampleConfig};
use crate::error::{Error, Result};
use crate::experiments::{
    default_b_grid, ingest_vectors, run_bounds_report, run_distortion, run_tradeoff, Evaluator,
    FamilyKind, VectorFamily, DEFAULT_RANDOM_COUNT,
};
use crate::oracle::error_z;
use crate::sketch::{
    sample_sign_consistent, sample_sparse_jl, select_params, AnyMatrix, MatrixKind, SketchParams,
    ThetaConstants,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERDICT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const DEFAULT_TRIALS: u64 = 10_000;
const DEFAULT_COUNTEREXAMPLE_TRIALS: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(name = "scjl", version, about = "Sparse sign-consistent Johnson-Lindenstrauss experiments")]
pub struct Cli {
    /// Seed for every random draw; required by stochastic commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Monte Carlo trials (per family, or per grid point).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Parameter constants as `c_s,c_m`.
    #[arg(long, global = true, default_value_t = ThetaConstants::default())]
    constants: ThetaConstants,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sparsity and dimension for (eps, delta, B).
    Params(Targets),
    /// Sample a matrix and write it as scjl-matrix-v1 JSON.
    Sample(SampleArgs),
    /// Apply a stored matrix to the rows of a vector file.
    Apply(ApplyArgs),
    /// Empirical failure rates P[|Z| > eps] per vector family.
    Distortion(DistortionArgs),
    /// Distortion experiment across a grid of B.
    Tradeoff(TradeoffArgs),
    /// Exact-to-bound ratio ranges on the small-instance grids.
    BoundsReport(BoundsArgs),
    /// Hanson-Wright bound U_p against the true moment on the two-spike vector.
    Counterexample(CounterexampleArgs),
}

fn parse_b(s: &str) -> std::result::Result<f64, String> {
    if s == "e" {
        return Ok(std::f64::consts::E);
    }
    s.parse::<f64>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct Targets {
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Tradeoff ratio m/s^2 in [e, 1/delta]; `e` is accepted.
    #[arg(long, value_parser = parse_b, default_value = "e")]
    b: f64,
    #[arg(long, default_value_t = 256)]
    n: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    SignConsistent,
    SparseJl,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    targets: Targets,
    /// Explicit dimension; overrides the selected one together with --s.
    #[arg(long, requires = "s")]
    m: Option<usize>,
    #[arg(long, requires = "m")]
    s: Option<usize>,
    #[arg(long, value_enum, default_value_t = KindArg::SignConsistent)]
    kind: KindArg,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// CSV of vectors, one per row; rows are normalized.
    #[arg(long)]
    vectors: PathBuf,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// Comma-separated families: basis, uniform, two_spike, random_unit, file.
    #[arg(long, value_delimiter = ',', default_value = "basis,uniform,two_spike,random_unit")]
    family: Vec<FamilyKind>,
    /// Vector file for the `file` family.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Number of random_unit vectors.
    #[arg(long, default_value_t = DEFAULT_RANDOM_COUNT)]
    count: usize,
}

#[derive(Debug, Args)]
struct DistortionArgs {
    #[command(flatten)]
    targets: Targets,
    #[command(flatten)]
    families: FamilyArgs,
}

#[derive(Debug, Args)]
struct TradeoffArgs {
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Explicit B values; otherwise --points log-spaced values from e to 1/delta.
    #[arg(long, value_delimiter = ',', value_parser = parse_b)]
    b_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[command(flatten)]
    families: FamilyArgs,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Comma-separated evaluators (default all).
    #[arg(long, default_value = "khintchine,hitczenko,latala_symmetric,quadform,hanson_wright,manybin")]
    evaluators: String,
    /// Seed of the random quadratic-form grid the constants were frozen on.
    #[arg(long, default_value_t = GRID_SEED)]
    grid_seed: u64,
}

#[derive(Debug, Args)]
struct CounterexampleArgs {
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Even moment orders.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    p_grid: Vec<u32>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn require_seed(cli: &Cli, command: &str) -> Result<u64> {
    cli.seed
        .ok_or_else(|| Error::InvalidParameter(format!("`{command}` is stochastic and needs --seed")))
}

fn finish(cli: &Cli, report: &Report, code: i32) -> Result<i32> {
    output::emit(&report.render(cli.format)?, cli.out.as_deref())?;
    Ok(code)
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Params(t) => cmd_params(cli, t),
        Command::Sample(a) => cmd_sample(cli, a),
        Command::Apply(a) => cmd_apply(cli, a),
        Command::Distortion(a) => cmd_distortion(cli, a),
        Command::Tradeoff(a) => cmd_tradeoff(cli, a),
        Command::BoundsReport(a) => cmd_bounds_report(cli, a),
        Command::Counterexample(a) => cmd_counterexample(cli, a),
    }
}

fn cmd_params(cli: &Cli, t: &Targets) -> Result<i32> {
    let p = select_params(t.n, t.eps, t.delta, t.b, cli.constants)?;
    let config = json!({
        "eps": t.eps, "delta": t.delta, "b": t.b, "n": t.n,
        "c_s": cli.constants.c_s, "c_m": cli.constants.c_m,
    });
    let mut report = Report::new("params", cli.seed, config, vec!["eps", "delta", "b_requested", "n", "s", "m", "b"]);
    report.push(vec![
        t.eps.to_string(),
        t.delta.to_string(),
        t.b.to_string(),
        p.n().to_string(),
        p.s().to_string(),
        p.m().to_string(),
        p.b().to_string(),
    ]);
    finish(cli, &report, EXIT_OK)
}

fn cmd_sample(cli: &Cli, a: &SampleArgs) -> Result<i32> {
    let seed = require_seed(cli, "sample")?;
    let t = &a.targets;
    let params = match (a.m, a.s) {
        (Some(m), Some(s)) => SketchParams::new(t.n, m, s)?,
        _ => select_params(t.n, t.eps, t.delta, t.b, cli.constants)?,
    };
    let matrix: AnyMatrix = match a.kind {
        KindArg::SignConsistent => sample_sign_consistent(&params, seed).into(),
        KindArg::SparseJl => sample_sparse_jl(&params, seed).into(),
    };
    let mut text = matrix.to_json()?.into_bytes();
    text.push(b'\n');
    output::emit(&text, cli.out.as_deref())?;
    Ok(EXIT_OK)
}

fn kind_name(kind: MatrixKind) -> &'static str {
    match kind {
        MatrixKind::SignConsistent => "sign_consistent",
        MatrixKind::SparseJl => "sparse_jl",
    }
}

fn cmd_apply(cli: &Cli, a: &ApplyArgs) -> Result<i32> {
    let matrix = AnyMatrix::read_json(BufReader::new(File::open(&a.matrix)?))?;
    let vectors = ingest_vectors(&a.vectors)?;
    let sketch = matrix.as_sketch();
    let p = sketch.params();
    let config = json!({
        "matrix": a.matrix.display().to_string(),
        "vectors": a.vectors.display().to_string(),
        "kind": kind_name(matrix.kind()),
        "n": p.n(), "m": p.m(), "s": p.s(),
        "matrix_seed": matrix.seed(),
    });
    let mut report = Report::new("apply", matrix.seed(), config, vec!["vector", "z", "y"]);
    let mut json_rows = Vec::with_capacity(vectors.len());
    for (k, x) in vectors.iter().enumerate() {
        let y = sketch.apply(x)?;
        let z = error_z(sketch, x)?;
        let joined = y.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
        report.push(vec![k.to_string(), z.to_string(), joined]);
        json_rows.push(json!({"vector": k, "z": z, "y": y}));
    }
    report.json_rows = Some(json_rows.into());
    finish(cli, &report, EXIT_OK)
}

fn load_families(args: &FamilyArgs, n: usize, seed: u64) -> Result<(usize, Vec<VectorFamily>)> {
    if args.family.is_empty() {
        return Err(Error::InvalidParameter("no vector families selected".into()));
    }
    let file = match (&args.dataset, args.family.contains(&FamilyKind::File)) {
        (Some(path), true) => Some(VectorFamily::from_file(path)?),
        (None, true) => return Err(Error::InvalidParameter("family `file` needs --dataset".into())),
        (Some(_), false) => {
            return Err(Error::InvalidParameter("--dataset given without the `file` family".into()))
        }
        (None, false) => None,
    };
    let n = match &file {
        Some(f) if f.dim() != n => {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.dim(),
            })
        }
        _ => n,
    };
    let families = args
        .family
        .iter()
        .map(|&kind| match kind {
            FamilyKind::File => Ok(file.clone().expect("loaded above")),
            _ => VectorFamily::builtin(kind, n, args.count, seed),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((n, families))
}

fn families_config(args: &FamilyArgs) -> serde_json::Value {
    json!({
        "families": args.family.iter().map(|f| f.as_str()).collect::<Vec<_>>(),
        "dataset": args.dataset.as_deref().map(|p| p.display().to_string()),
        "count": args.count,
    })
}

const FAMILY_HEADER: [&str; 8] = ["family", "vectors", "trials", "failures", "rate", "ci_low", "ci_high", "pass"];

fn family_cells(r: &crate::experiments::FamilyResult) -> Vec<String> {
    vec![
        r.family.to_string(),
        r.vectors.to_string(),
        r.trials.to_string(),
        r.failures.to_string(),
        r.rate.to_string(),
        r.ci.low.to_string(),
        r.ci.high.to_string(),
        r.pass.to_string(),
    ]
}

fn cmd_distortion(cli: &Cli, a: &DistortionArgs) -> Result<i32> {
    let seed = require_seed(cli, "distortion")?;
    let t = &a.targets;
    let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);
    let (n, families) = load_families(&a.families, t.n, seed)?;
    let params = select_params(n, t.eps, t.delta, t.b, cli.constants)?;
    let results = run_distortion(&params, t.eps, t.delta, &families, trials, seed)?;
    let config = json!({
        "eps": t.eps, "delta": t.delta, "b": t.b, "n": n, "trials": trials,
        "c_s": cli.constants.c_s, "c_m": cli.constants.c_m,
        "s": params.s(), "m": params.m(),
        "vectors": families_config(&a.families),
    });
    let mut report = Report::new("distortion", Some(seed), config, FAMILY_HEADER.to_vec());
    for r in &results {
        report.push(family_cells(r));
    }
    let pass = results.iter().all(|r| r.pass);
    report.summary = Some(json!({ "pass": pass }));
    finish(cli, &report, if pass { EXIT_OK } else { EXIT_VERDICT })
}

fn cmd_tradeoff(cli: &Cli, a: &TradeoffArgs) -> Result<i32> {
    let seed = require_seed(cli, "tradeoff")?;
    let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);
    let grid = match &a.b_grid {
        Some(g) => g.clone(),
        None => default_b_grid(a.delta, a.points),
    };
    let (n, families) = load_families(&a.families, a.n, seed)?;
    let points = run_tradeoff(n, a.eps, a.delta, &grid, cli.constants, &families, trials, seed)?;
    let config = json!({
        "eps": a.eps, "delta": a.delta, "n": n, "trials": trials, "b_grid": grid,
        "c_s": cli.constants.c_s, "c_m": cli.constants.c_m,
        "vectors": families_config(&a.families),
    });
    let mut header = vec!["b_requested", "s", "m", "b"];
    header.extend(FAMILY_HEADER);
    let mut report = Report::new("tradeoff", Some(seed), config, header);
    for point in &points {
        for r in &point.families {
            let mut row = vec![
                point.b_requested.to_string(),
                point.s.to_string(),
                point.m.to_string(),
                point.b.to_string(),
            ];
            row.extend(family_cells(r));
            report.push(row);
        }
    }
    let pass = points.iter().all(|p| p.families.iter().all(|r| r.pass));
    let s_nonincreasing = points.windows(2).all(|w| w[1].s <= w[0].s);
    let m_nondecreasing = points.windows(2).all(|w| w[1].m >= w[0].m);
    report.summary = Some(json!({
        "pass": pass,
        "s_nonincreasing": s_nonincreasing,
        "m_nondecreasing": m_nondecreasing,
    }));
    finish(cli, &report, if pass { EXIT_OK } else { EXIT_VERDICT })
}

fn cmd_bounds_report(cli: &Cli, a: &BoundsArgs) -> Result<i32> {
    let evaluators = a
        .evaluators
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Evaluator>>>()?;
    let rows = run_bounds_report(&evaluators, a.grid_seed)?;
    let config = json!({
        "evaluators": evaluators.iter().map(|e| e.as_str()).collect::<Vec<_>>(),
        "grid_seed": a.grid_seed,
    });
    let header = vec!["evaluator", "mode", "instances", "min_ratio", "max_ratio", "frozen_low", "frozen_high", "pass"];
    let mut report = Report::new("bounds-report", Some(a.grid_seed), config, header);
    for r in &rows {
        report.push(vec![
            r.evaluator.as_str().to_string(),
            r.mode.to_string(),
            r.instances.to_string(),
            r.min_ratio.to_string(),
            r.max_ratio.to_string(),
            r.frozen_low.to_string(),
            r.frozen_high.to_string(),
            r.pass.to_string(),
        ]);
    }
    let pass = rows.iter().all(|r| r.pass);
    report.summary = Some(json!({ "pass": pass }));
    finish(cli, &report, if pass { EXIT_OK } else { EXIT_VERDICT })
}

fn cmd_counterexample(cli: &Cli, a: &CounterexampleArgs) -> Result<i32> {
    let seed = require_seed(cli, "counterexample")?;
    let trials = cli.trials.unwrap_or(DEFAULT_COUNTEREXAMPLE_TRIALS);
    let config = CounterexampleConfig {
        eps: a.eps,
        p_grid: a.p_grid.clone(),
        trials,
        seed,
        constants: cli.constants,
    };
    let rows = compare_dimensions(&config)?;
    let config_json = json!({
        "eps": a.eps, "p_grid": a.p_grid, "trials": trials, "b": std::f64::consts::E,
        "c_s": cli.constants.c_s, "c_m": cli.constants.c_m,
    });
    let header = vec![
        "p", "s", "m", "B", "U_p", "stderr", "p_normQ", "keyfail", "Z_norm", "Z_stderr", "looseness",
        "looseness_stderr", "delta", "hw_implied_m", "paper_m", "max_identity_error",
    ];
    let mut report = Report::new("counterexample", Some(seed), config_json, header);
    for r in &rows {
        report.push(vec![
            r.p.to_string(),
            r.s.to_string(),
            r.m.to_string(),
            r.b.to_string(),
            r.u_p.to_string(),
            r.u_p_stderr.to_string(),
            r.p_norm_q.to_string(),
            r.keyfail.to_string(),
            r.z_norm.to_string(),
            r.z_stderr.to_string(),
            r.looseness.to_string(),
            r.looseness_stderr.to_string(),
            r.delta.to_string(),
            r.hw_implied_m.to_string(),
            r.direct_m.to_string(),
            r.max_identity_error.to_string(),
        ]);
    }
    let nondecreasing = rows.windows(2).all(|w| {
        let slack = 3.0 * (w[0].looseness_stderr.powi(2) + w[1].looseness_stderr.powi(2)).sqrt();
        w[1].looseness >= w[0].looseness - slack
    });
    report.summary = Some(json!({ "looseness_nondecreasing": nondecreasing }));
    finish(cli, &report, EXIT_OK)
}

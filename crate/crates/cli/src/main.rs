//! `maxweight`: command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 bound violations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use maxweight_core::dist::{parse_dist_spec, regularity_profile, Distribution};
use maxweight_core::experiments::{
    certify_rows_to_csv, certify_trials, gen_instance, ratio_table, run_trials,
    table_to_csv, write_report, ExperimentReport, Objective, ReportFormat, RunConfig,
};
use maxweight_core::pruning::default_delta;
use maxweight_core::ratefn::RateFunction;
use maxweight_core::solvers::{solve, SolveOptions, DEFAULT_DP_CAP};
use maxweight_core::structures::{FamilyTag, GraphPattern, StructureFamily};
use maxweight_core::{Error, ExtReal};

#[derive(Parser)]
#[command(name = "maxweight", version, about = "Maximum-weight structures in randomly weighted complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the rate function or its generalized inverse.
    Ratefn(RatefnArgs),
    /// Print r(t) = −log P(X > t) / Λ*(t) on a grid, as CSV.
    CheckTails(CheckTailsArgs),
    /// Leading-order value of the optimum.
    Predict(PredictArgs),
    /// Solve one seeded instance exactly and print the optimum as JSON.
    Solve(SolveArgs),
    /// Seek pruning certificates over seeded trials; one CSV row per trial.
    Certify(CertifyArgs),
    /// Run seeded trials, print the summary, optionally write the report.
    Simulate(SimulateArgs),
    /// Mean ratio to the prediction across several scales, as CSV.
    Table(TableArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Matching,
    Tree,
    Hamcycle,
    Path,
    Copy,
}

impl From<Family> for FamilyTag {
    fn from(f: Family) -> Self {
        match f {
            Family::Matching => FamilyTag::Matching,
            Family::Tree => FamilyTag::SpanningTree,
            Family::Hamcycle => FamilyTag::HamiltonCycle,
            Family::Path => FamilyTag::PathOneTwo,
            Family::Copy => FamilyTag::CopyOf,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

fn dist_arg(s: &str) -> Result<Distribution, String> {
    parse_dist_spec(s).map_err(|e| e.to_string())
}

fn pattern_arg(s: &str) -> Result<GraphPattern, String> {
    GraphPattern::parse(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct RatefnArgs {
    #[arg(long, value_parser = dist_arg)]
    dist: Distribution,
    /// Print Λ*(t).
    #[arg(long, value_name = "T", allow_negative_numbers = true,
          required_unless_present = "inverse", conflicts_with = "inverse")]
    eval: Option<f64>,
    /// Print inf { s : Λ*(s) ≥ y }.
    #[arg(long, value_name = "Y")]
    inverse: Option<f64>,
    /// Use the numeric Legendre transform even where a closed form exists.
    #[arg(long)]
    numeric: bool,
}

#[derive(Args)]
struct CheckTailsArgs {
    #[arg(long, value_parser = dist_arg)]
    dist: Distribution,
    /// `start:stop:step`, inclusive of `stop`.
    #[arg(long, value_name = "A:B:STEP")]
    grid: String,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, value_parser = dist_arg)]
    dist: Distribution,
    /// Pattern for `--family copy`: `v=4;edges=1-2,2-3,3-1,1-4` or a name.
    #[arg(long, value_parser = pattern_arg)]
    pattern: Option<GraphPattern>,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    /// Largest n for the exact cycle and path solvers.
    #[arg(long, default_value_t = DEFAULT_DP_CAP)]
    dp_cap: usize,
}

#[derive(Args)]
struct TrialArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    trials: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_DP_CAP)]
    dp_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    n: usize,
    /// Pruning slack; defaults to 1 / log n.
    #[arg(long)]
    delta: Option<f64>,
    #[command(flatten)]
    run: TrialArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    run: TrialArgs,
    /// Report format for `--out`; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also seek a pruning certificate per trial with this slack.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum, default_value = "max")]
    objective: ObjectiveArg,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Comma-separated scales.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[command(flatten)]
    run: TrialArgs,
}

/// How a command failed.
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match cli.command {
        Command::Ratefn(a) => ratefn(a),
        Command::CheckTails(a) => check_tails(a),
        Command::Predict(a) => predict(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Certify(a) => certify(a),
        Command::Simulate(a) => simulate(a),
        Command::Table(a) => table(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// 15 significant digits, printed in the shortest form that keeps them.
fn fmt15(x: f64) -> String {
    if !x.is_finite() {
        return if x > 0.0 { "inf".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

fn fmt_ext(x: ExtReal) -> String {
    match x {
        ExtReal::Finite(v) => fmt15(v),
        ExtReal::PosInf => "inf".into(),
    }
}

fn family(args: &FamilyArgs, n: usize) -> Result<StructureFamily, Failure> {
    let tag = FamilyTag::from(args.family);
    match (tag, &args.pattern) {
        (FamilyTag::CopyOf, None) => {
            return Err(Failure::Usage("--pattern is required with --family copy".into()))
        }
        (t, Some(_)) if t != FamilyTag::CopyOf => {
            return Err(Failure::Usage(format!("--pattern is only valid with --family copy, not {t}")))
        }
        _ => {}
    }
    Ok(StructureFamily::from_tag(tag, n, args.pattern.clone())?)
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| {
            Failure::Domain(Error::Io {
                path: path.to_path_buf(),
                source,
            })
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Domain(Error::Report(format!("stdout: {e}"))))
        }
    }
}

fn ratefn(a: RatefnArgs) -> Outcome {
    let rate = RateFunction::new(a.dist);
    let value = match (a.eval, a.inverse) {
        (Some(t), _) => {
            if a.numeric {
                rate.legendre_numeric(t)
            } else {
                rate.legendre(t)
            }
        }
        (None, Some(y)) => {
            if !(y >= 0.0) {
                return Err(Failure::Domain(Error::invalid(format!("--inverse needs y ≥ 0, got {y}"))));
            }
            ExtReal::Finite(rate.rate_inverse(y))
        }
        (None, None) => unreachable!("clap enforces one of --eval / --inverse"),
    };
    println!("{}", fmt_ext(value));
    Ok(ExitCode::SUCCESS)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("--grid expects start:stop:step, got {spec:?}"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [a, b, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(Failure::Usage("--grid has more than 10^6 points".into()));
    }
    Ok((0..count).map(|k| a + k as f64 * step).collect())
}

fn check_tails(a: CheckTailsArgs) -> Outcome {
    let grid = parse_grid(&a.grid)?;
    if grid.iter().any(|&t| t <= 0.0) {
        return Err(Failure::Usage("--grid points must be positive".into()));
    }
    let rate = RateFunction::new(a.dist);
    let profile = regularity_profile(&rate, &grid)?;
    let mut out = String::from("t,r\n");
    for (t, r) in profile {
        out.push_str(&format!("{},{}\n", fmt15(t), fmt_ext(r)));
    }
    emit(out.as_bytes(), None)?;
    Ok(ExitCode::SUCCESS)
}

fn predict(a: PredictArgs) -> Outcome {
    let fam = family(&a.fam, a.n)?;
    if a.n < 2 {
        return Err(Failure::Domain(Error::invalid("--n must be at least 2")));
    }
    let rate = RateFunction::new(a.fam.dist.clone());
    println!("{}", fmt15(fam.predict(&rate)));
    Ok(ExitCode::SUCCESS)
}

fn solve_cmd(a: SolveArgs) -> Outcome {
    let fam = family(&a.fam, a.n)?;
    let inst = gen_instance(&fam, &a.fam.dist, a.seed, a.trial);
    let sol = solve(&fam, &inst, SolveOptions { dp_cap: a.dp_cap })?;
    let edges: Vec<[usize; 2]> = sol.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
    let out = json!({
        "family": fam.tag(),
        "pattern": fam.pattern().map(|p| p.pattern().to_string()),
        "dist": a.fam.dist.label(),
        "n": a.n,
        "seed": a.seed,
        "trial": a.trial,
        "weight": sol.weight,
        "edges": edges,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json value serializes"));
    Ok(ExitCode::SUCCESS)
}

fn run_config(fam: StructureFamily, dist: Distribution, run: &TrialArgs) -> RunConfig {
    let mut cfg = RunConfig::new(fam, dist, run.trials, run.seed);
    cfg.workers = run.workers;
    cfg.solve = SolveOptions { dp_cap: run.dp_cap };
    cfg
}

fn check_workers(run: &TrialArgs) -> Result<(), Failure> {
    if run.workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    if run.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    Ok(())
}

fn certify(a: CertifyArgs) -> Outcome {
    check_workers(&a.run)?;
    let fam = family(&a.fam, a.n)?;
    let delta = a.delta.unwrap_or_else(|| default_delta(a.n));
    let cfg = run_config(fam, a.fam.dist.clone(), &a.run);
    let rows = certify_trials(&cfg, delta)?;
    emit(&certify_rows_to_csv(&rows)?, a.run.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn summary_json(r: &ExperimentReport) -> serde_json::Value {
    json!({
        "family": r.family,
        "dist": r.dist,
        "n": r.n,
        "trials": r.trials,
        "seed": r.seed,
        "mean": r.summary.mean,
        "variance": r.summary.variance,
        "min": r.summary.min,
        "max": r.summary.max,
        "prediction": r.prediction,
        "ewn_bound": r.ewn_bound,
        "ratio_mean": r.summary.ratio_mean,
        "ratio_stderr": r.summary.ratio_stderr,
        "violations": r.violations,
    })
}

fn simulate(a: SimulateArgs) -> Outcome {
    check_workers(&a.run)?;
    let fam = family(&a.fam, a.n)?;
    let mut cfg = run_config(fam, a.fam.dist.clone(), &a.run);
    cfg.certify_delta = a.delta;
    cfg.objective = match a.objective {
        ObjectiveArg::Max => Objective::Max,
        ObjectiveArg::Min => Objective::Min,
    };
    let report = run_trials(&cfg)?;
    if let Some(path) = &a.run.out {
        let format = match a.format {
            Some(Format::Csv) => ReportFormat::Csv,
            Some(Format::Json) => ReportFormat::Json,
            None => ReportFormat::from_path(path),
        };
        write_report(&report, path, format)?;
    }
    println!("{}", serde_json::to_string_pretty(&summary_json(&report)).expect("json value serializes"));
    if report.violations.total() > 0 {
        eprintln!("bound violations: {:?}", report.violations);
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn table(a: TableArgs) -> Outcome {
    check_workers(&a.run)?;
    // validates the pattern flag once for the whole list
    let fam = family(&a.fam, a.n_list[0])?;
    let cfg = run_config(fam, a.fam.dist.clone(), &a.run);
    let rows = ratio_table(&cfg, &a.n_list)?;
    emit(&table_to_csv(&rows)?, a.run.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

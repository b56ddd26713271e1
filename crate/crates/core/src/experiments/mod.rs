//! Seeded Monte Carlo harness: generate instances, solve them, and compare
//! the optimum with the predicted value and the proven bounds.
//!
//! Every edge weight is a pure function of `(seed, trial, edge index)`, so
//! trials may run in any order on any number of workers.

mod report;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{parse_dist_spec, Distribution};
use crate::pruning::{certify_with, pruning_level, CertifyOptions};
use crate::ratefn::RateFunction;
use crate::solvers::{check_solvable, solve, Provenance, Shape, SolveOptions, WeightedInstance};
use crate::structures::{FamilyKind, StructureFamily};
use crate::{Error, Result};

pub use report::{
    certify_rows_to_csv, read_report, read_rows_csv, rows_to_csv, summarize, table_to_csv,
    write_report, ExperimentReport, ReportFormat, Summary, TrialRow, Violations, CSV_HEADER,
};

/// Recorded in every report so that the weights can be regenerated.
pub const GENERATOR: &str =
    "chacha20; key = seed_from_u64(seed); stream = trial; one u64 per edge in canonical order";

fn stream(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// The instance of trial `trial` under `seed`.
pub fn gen_instance(
    family: &StructureFamily,
    dist: &Distribution,
    seed: u64,
    trial: u64,
) -> WeightedInstance {
    let n = family.n;
    let shape = if family.is_bipartite() {
        Shape::BipartiteComplete(n)
    } else {
        Shape::Complete(n)
    };
    let mut rng = stream(seed, trial);
    let weights = (0..crate::solvers::edge_count(shape))
        .map(|_| dist.sample(&mut rng))
        .collect();
    let mut inst = WeightedInstance::new(shape, weights).expect("samples are finite");
    inst.provenance = Some(Provenance {
        dist: dist.label(),
        seed,
        trial,
    });
    inst
}

/// The weight of one edge, generated without the rest of the instance.
pub fn edge_weight(dist: &Distribution, seed: u64, trial: u64, edge: usize) -> f64 {
    let mut rng = stream(seed, trial);
    // a u64 spans two 32-bit words of the keystream
    rng.set_word_pos(2 * edge as u128);
    dist.sample(&mut rng)
}

/// Whether trials maximise or minimise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    #[default]
    Max,
    /// Solved as `−max(−w)`.
    Min,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub family: StructureFamily,
    pub dist: Distribution,
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `0` lets the pool pick.
    pub workers: usize,
    /// Also seek a pruning certificate with this `δ`.
    pub certify_delta: Option<f64>,
    pub objective: Objective,
    pub solve: SolveOptions,
}

impl RunConfig {
    pub fn new(family: StructureFamily, dist: Distribution, trials: u64, seed: u64) -> Self {
        RunConfig {
            family,
            dist,
            trials,
            seed,
            workers: 1,
            certify_delta: None,
            objective: Objective::Max,
            solve: SolveOptions::default(),
        }
    }
}

/// Solve every trial and assemble the report.
///
/// Size limits and parameters are checked before any instance is drawn.
pub fn run_trials(cfg: &RunConfig) -> Result<ExperimentReport> {
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    check_solvable(&cfg.family, cfg.solve)?;
    if let Some(delta) = cfg.certify_delta {
        pruning_level(&cfg.family, &cfg.dist, delta)?;
    }
    let rate = RateFunction::new(cfg.dist.clone());
    let prediction = cfg.family.predict(&rate);
    let ewn_bound = cfg.family.expectation_bound(&rate);
    let finite_n_upper = finite_n_upper(&cfg.family, prediction);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let rows: Vec<TrialRow> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_one(cfg, t, prediction))
            .collect::<Result<Vec<_>>>()
    })?;

    Ok(ExperimentReport::assemble(cfg, prediction, ewn_bound, finite_n_upper, rows))
}

fn run_one(cfg: &RunConfig, trial: u64, prediction: f64) -> Result<TrialRow> {
    let inst = gen_instance(&cfg.family, &cfg.dist, cfg.seed, trial);
    let weight = match cfg.objective {
        Objective::Max => solve(&cfg.family, &inst, cfg.solve)?.weight,
        Objective::Min => -solve(&cfg.family, &inst.map_weights(|w| -w), cfg.solve)?.weight,
    };
    let (found_certificate, certified_bound) = match cfg.certify_delta {
        Some(delta) => {
            let opts = CertifyOptions {
                dp_cap: cfg.solve.dp_cap,
                ..CertifyOptions::default()
            };
            let c = certify_with(&cfg.family, &inst, delta, &cfg.dist, opts)?;
            (Some(c.found()), c.certified_bound)
        }
        None => (None, None),
    };
    Ok(TrialRow {
        trial,
        weight,
        ratio: (prediction != 0.0).then(|| weight / prediction),
        found_certificate,
        certified_bound,
    })
}

/// `(1 + 1/n)` times the prediction: the union-bound ceiling that the
/// optimum exceeds with probability at most about `e^{−n}`. Not defined for
/// pattern copies, whose structure count leaves no such margin.
pub fn finite_n_upper(family: &StructureFamily, prediction: f64) -> Option<f64> {
    match family.kind {
        FamilyKind::CopyOf(_) => None,
        _ => Some((1.0 + 1.0 / family.n as f64) * prediction),
    }
}

/// One trial of a certification sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyRow {
    pub trial: u64,
    pub level: f64,
    pub found: bool,
    pub certified_bound: Option<f64>,
    /// Absent when the exact solver cannot handle the size.
    pub exact_optimum: Option<f64>,
    /// `exact_optimum / prediction`.
    pub ratio_to_prediction: Option<f64>,
}

/// Certify every trial with `δ = delta`, solving exactly where the solver
/// caps allow.
pub fn certify_trials(cfg: &RunConfig, delta: f64) -> Result<Vec<CertifyRow>> {
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    pruning_level(&cfg.family, &cfg.dist, delta)?;
    let exact = check_solvable(&cfg.family, cfg.solve).is_ok();
    let prediction = cfg.family.predict(&RateFunction::new(cfg.dist.clone()));
    let opts = CertifyOptions {
        dp_cap: cfg.solve.dp_cap,
        ..CertifyOptions::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let inst = gen_instance(&cfg.family, &cfg.dist, cfg.seed, trial);
                let c = certify_with(&cfg.family, &inst, delta, &cfg.dist, opts)?;
                let exact_optimum = if exact {
                    Some(solve(&cfg.family, &inst, cfg.solve)?.weight)
                } else {
                    None
                };
                Ok(CertifyRow {
                    trial,
                    level: c.level,
                    found: c.found(),
                    certified_bound: c.certified_bound,
                    exact_optimum,
                    ratio_to_prediction: exact_optimum
                        .filter(|_| prediction != 0.0)
                        .map(|w| w / prediction),
                })
            })
            .collect()
    })
}

/// One row of a ratio table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub mean: f64,
    pub prediction: f64,
    pub ratio_mean: Option<f64>,
    pub stderr: f64,
    pub ewn_bound: f64,
    pub max: f64,
    pub finite_n_upper: Option<f64>,
}

/// The experiment `template` repeated at each scale in `n_list`.
pub fn ratio_table(template: &RunConfig, n_list: &[usize]) -> Result<Vec<TableRow>> {
    let kind = &template.family.kind;
    // reject any oversize scale before running the others
    for &n in n_list {
        check_solvable(&kind.at(n), template.solve)?;
    }
    n_list
        .iter()
        .map(|&n| {
            let cfg = RunConfig {
                family: kind.at(n),
                ..template.clone()
            };
            let r = run_trials(&cfg)?;
            Ok(TableRow {
                n,
                mean: r.summary.mean,
                prediction: r.prediction,
                ratio_mean: r.summary.ratio_mean,
                stderr: r.summary.stderr,
                ewn_bound: r.ewn_bound,
                max: r.summary.max,
                finite_n_upper: r.finite_n_upper,
            })
        })
        .collect()
}

/// One deviation level of a concentration check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub t: f64,
    /// Fraction of trials with `|W − mean| ≥ t`.
    pub frequency: f64,
    /// `2 exp(−t² / (2 l σ²))`.
    pub bound: f64,
    pub stderr: f64,
    pub flagged: bool,
}

/// Gaussian concentration of the optimum about its mean, at
/// `t = σ√l, 2σ√l, 3σ√l`.
pub fn concentration_check(report: &ExperimentReport, l: usize) -> Result<Vec<ConcentrationRow>> {
    let dist = parse_dist_spec(&report.dist)?;
    let sigma = match dist.spec() {
        crate::dist::DistSpec::Gaussian { sigma } => *sigma,
        _ => return Err(Error::NotGaussian(report.dist.clone())),
    };
    let scale = sigma * (l as f64).sqrt();
    Ok([1.0, 2.0, 3.0]
        .iter()
        .map(|&k| concentration_at(report, l, sigma, k * scale))
        .collect())
}

/// A single level `t` of [`concentration_check`].
pub fn concentration_at(report: &ExperimentReport, l: usize, sigma: f64, t: f64) -> ConcentrationRow {
    let k = report.rows.len() as f64;
    let mean = report.summary.mean;
    let hits = report.rows.iter().filter(|r| (r.weight - mean).abs() >= t).count();
    let frequency = hits as f64 / k;
    let bound = 2.0 * (-t * t / (2.0 * l as f64 * sigma * sigma)).exp();
    let p = bound.min(1.0);
    let stderr = (p * (1.0 - p) / k).sqrt();
    ConcentrationRow {
        t,
        frequency,
        bound,
        stderr,
        flagged: frequency > bound + 3.0 * stderr,
    }
}

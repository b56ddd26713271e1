//! Experiment reports and their CSV / JSON forms.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Objective, RunConfig, GENERATOR};
use crate::structures::{FamilyKind, FamilyTag};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["trial", "weight", "ratio", "found_certificate", "certified_bound"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: u64,
    pub weight: f64,
    /// `weight / prediction`; absent when the prediction is 0.
    pub ratio: Option<f64>,
    pub found_certificate: Option<bool>,
    pub certified_bound: Option<f64>,
}

/// Statistics of the per-trial weights, accumulated in trial order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample variance (divisor `k − 1`).
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub stderr: f64,
    pub ratio_mean: Option<f64>,
    pub ratio_stderr: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violations {
    /// Trials whose optimum exceeds the finite-`n` union bound.
    pub finite_n_upper: u64,
    /// 1 if the mean exceeds the expectation bound by more than 3 standard errors.
    pub ewn: u64,
}

impl Violations {
    pub fn total(&self) -> u64 {
        self.finite_n_upper + self.ewn
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub family: FamilyTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
    pub dist: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub objective: Objective,
    #[serde(flatten)]
    pub summary: Summary,
    pub prediction: f64,
    pub ewn_bound: f64,
    pub finite_n_upper: Option<f64>,
    pub violations: Violations,
    pub delta: Option<f64>,
    pub generator: String,
    pub rows: Vec<TrialRow>,
}

/// Mean and standard error with a two-pass variance.
fn moments(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64, f64) {
    let k = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / k;
    let variance = if k > 1.0 {
        xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    (mean, variance, (variance / k).sqrt())
}

pub fn summarize(rows: &[TrialRow]) -> Summary {
    let weights = rows.iter().map(|r| r.weight);
    let (mean, variance, stderr) = moments(weights.clone());
    let (ratio_mean, ratio_stderr) = if rows.iter().all(|r| r.ratio.is_some()) {
        let (m, _, se) = moments(rows.iter().map(|r| r.ratio.expect("checked")));
        (Some(m), Some(se))
    } else {
        (None, None)
    };
    Summary {
        mean,
        variance,
        min: weights.clone().fold(f64::INFINITY, f64::min),
        max: weights.fold(f64::NEG_INFINITY, f64::max),
        stderr,
        ratio_mean,
        ratio_stderr,
    }
}

fn count_violations(
    objective: Objective,
    summary: &Summary,
    rows: &[TrialRow],
    ewn_bound: f64,
    finite_n_upper: Option<f64>,
) -> Violations {
    // both bounds are upper bounds on the maximum
    if objective == Objective::Min {
        return Violations::default();
    }
    Violations {
        finite_n_upper: finite_n_upper
            .map_or(0, |b| rows.iter().filter(|r| r.weight > b).count() as u64),
        ewn: u64::from(summary.mean > ewn_bound + 3.0 * summary.stderr),
    }
}

impl ExperimentReport {
    pub(super) fn assemble(
        cfg: &RunConfig,
        prediction: f64,
        ewn_bound: f64,
        finite_n_upper: Option<f64>,
        rows: Vec<TrialRow>,
    ) -> Self {
        let summary = summarize(&rows);
        let violations = count_violations(cfg.objective, &summary, &rows, ewn_bound, finite_n_upper);
        ExperimentReport {
            family: cfg.family.tag(),
            pattern: match &cfg.family.kind {
                FamilyKind::CopyOf(p) => Some(p.pattern().to_string()),
                _ => None,
            },
            dist: cfg.dist.label(),
            n: cfg.family.n,
            trials: cfg.trials,
            seed: cfg.seed,
            objective: cfg.objective,
            summary,
            prediction,
            ewn_bound,
            finite_n_upper,
            violations,
            delta: cfg.certify_delta,
            generator: GENERATOR.to_string(),
            rows,
        }
    }

    /// Recompute the summary and violation counts from the rows and
    /// compare them with the stored ones, bit for bit.
    pub fn check_consistency(&self) -> Result<()> {
        if self.rows.len() as u64 != self.trials {
            return Err(Error::Report(format!(
                "{} rows for {} trials",
                self.rows.len(),
                self.trials
            )));
        }
        if self.rows.iter().enumerate().any(|(i, r)| r.trial != i as u64) {
            return Err(Error::Report("rows are not in trial order".into()));
        }
        let summary = summarize(&self.rows);
        if summary != self.summary {
            return Err(Error::Report(format!(
                "summary does not match rows: stored {:?}, recomputed {:?}",
                self.summary, summary
            )));
        }
        let v = count_violations(
            self.objective,
            &summary,
            &self.rows,
            self.ewn_bound,
            self.finite_n_upper,
        );
        if v != self.violations {
            return Err(Error::Report("violation counts do not match rows".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Parse {
                what: "report format",
                input: s.to_string(),
            }),
        }
    }

    /// Guess from the file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

/// 17 significant digits: enough to read back the same `f64`.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, message: impl ToString) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

/// Render the per-trial rows as CSV.
pub fn rows_to_csv(rows: &[TrialRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            fmt_f64(r.weight),
            opt(r.ratio),
            r.found_certificate.map(|f| u8::from(f).to_string()).unwrap_or_default(),
            opt(r.certified_bound),
        ])
        .map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Report(e.to_string()))
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// CSV with header `trial,level,found,certified_bound,exact_optimum,ratio_to_prediction`.
pub fn certify_rows_to_csv(rows: &[super::CertifyRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(["trial", "level", "found", "certified_bound", "exact_optimum", "ratio_to_prediction"])
        .map_err(err)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            fmt_f64(r.level),
            u8::from(r.found).to_string(),
            opt(r.certified_bound),
            opt(r.exact_optimum),
            opt(r.ratio_to_prediction),
        ])
        .map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Report(e.to_string()))
}

/// CSV of a ratio table, one row per scale.
pub fn table_to_csv(rows: &[super::TableRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Report(e.to_string());
    w.write_record([
        "n",
        "mean",
        "prediction",
        "ratio_mean",
        "stderr",
        "ewn_bound",
        "max",
        "finite_n_upper",
    ])
    .map_err(err)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            fmt_f64(r.mean),
            fmt_f64(r.prediction),
            opt(r.ratio_mean),
            fmt_f64(r.stderr),
            fmt_f64(r.ewn_bound),
            fmt_f64(r.max),
            opt(r.finite_n_upper),
        ])
        .map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Report(e.to_string()))
}

pub fn write_report(report: &ExperimentReport, path: &Path, format: ReportFormat) -> Result<()> {
    let bytes = match format {
        ReportFormat::Csv => rows_to_csv(&report.rows)?,
        ReportFormat::Json => {
            let mut s = serde_json::to_vec_pretty(report).map_err(|e| format_err(path, e))?;
            s.push(b'\n');
            s
        }
    };
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    out.write_all(&bytes).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

/// Load a JSON report and verify that its summary matches its rows.
pub fn read_report(path: &Path) -> Result<ExperimentReport> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let report: ExperimentReport = serde_json::from_str(&text).map_err(|e| format_err(path, e))?;
    report.check_consistency()?;
    Ok(report)
}

/// Load the rows of a CSV report.
pub fn read_rows_csv(path: &Path) -> Result<Vec<TrialRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| format_err(path, e))?;
    let header = rdr.headers().map_err(|e| format_err(path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(format_err(path, format!("unexpected header {header:?}")));
    }
    let opt_f64 = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| format_err(path, format!("{s:?}: {e}")))
        }
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| format_err(path, e))?;
        let trial = rec[0].parse().map_err(|e| format_err(path, format!("trial: {e}")))?;
        let weight = opt_f64(&rec[1])?.ok_or_else(|| format_err(path, "missing weight"))?;
        let found_certificate = match &rec[3] {
            "" => None,
            "0" => Some(false),
            "1" => Some(true),
            other => return Err(format_err(path, format!("found_certificate {other:?}"))),
        };
        rows.push(TrialRow {
            trial,
            weight,
            ratio: opt_f64(&rec[2])?,
            found_certificate,
            certified_bound: opt_f64(&rec[4])?,
        });
    }
    Ok(rows)
}

//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line.

use std::io::Write;

use maxweight_core::dist::{regularity_profile, DistSpec, Distribution};
use maxweight_core::experiments::{
    certify_trials, concentration_check, gen_instance, run_trials, write_report, ReportFormat,
    RunConfig,
};
use maxweight_core::pruning::default_delta;
use maxweight_core::ratefn::{threshold_xn, RateFunction};
use maxweight_core::solvers::{brute_force, solve, SolveOptions};
use maxweight_core::structures::{GraphPattern, StructureFamily};

/// Written to the stdout handle directly so the line survives output
/// capture in a plain `cargo test`.
fn verdict(id: u32, ok: bool, detail: &str) {
    let word = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {id}: {word} ({detail})").unwrap();
    out.flush().unwrap();
}

fn dist(spec: DistSpec) -> Distribution {
    Distribution::new(spec).unwrap()
}

fn gauss() -> Distribution {
    Distribution::standard_gaussian()
}

#[test]
fn criterion_01_rate_engine() {
    let g = RateFunction::new(gauss());
    let mut worst_g = 0.0f64;
    for i in 0..=1000 {
        let t = i as f64 * 0.01;
        let err = (g.legendre_numeric(t).to_f64() - t * t / 2.0).abs();
        worst_g = worst_g.max(err);
    }

    let r = RateFunction::new(dist(DistSpec::Rademacher));
    let mut worst_r = 0.0f64;
    for i in 0..=990 {
        let t = i as f64 * 0.001;
        let exact = if t == 0.0 {
            0.0
        } else {
            0.5 * (1.0 + t) * (1.0 + t).ln() + 0.5 * (1.0 - t) * (1.0 - t).ln()
        };
        worst_r = worst_r.max((r.legendre_numeric(t).to_f64() - exact).abs());
    }

    let mut worst_inv = 0.0f64;
    for d in [
        gauss(),
        dist(DistSpec::Laplace { scale: 1.0 }),
        dist(DistSpec::Uniform { half_width: 1.0 }),
    ] {
        let rate = RateFunction::new(d);
        for i in 0..=200 {
            let y = i as f64 * 0.1;
            let back = rate.legendre(rate.rate_inverse(y)).to_f64();
            worst_inv = worst_inv.max((back - y).abs());
        }
    }
    let ok = worst_g <= 1e-6 && worst_r <= 1e-6 && worst_inv <= 1e-6;
    verdict(
        1,
        ok,
        &format!("gaussian {worst_g:.2e}, rademacher {worst_r:.2e}, inverse {worst_inv:.2e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_02_oracle_equivalence() {
    let families = [
        StructureFamily::matching(6),
        StructureFamily::spanning_tree(7),
        StructureFamily::hamilton_cycle(8),
        StructureFamily::path_one_two(8),
        StructureFamily::copy_of(GraphPattern::cycle(4), 7).unwrap(),
    ];
    let laws = [
        gauss(),
        dist(DistSpec::Laplace { scale: 1.0 }),
        dist(DistSpec::Uniform { half_width: 1.0 }),
        dist(DistSpec::Rademacher),
    ];
    let mut worst = 0.0f64;
    let mut checked = 0;
    for fam in &families {
        for trial in 0..120u64 {
            let law = &laws[trial as usize % laws.len()];
            let inst = gen_instance(fam, law, 2024, trial);
            let exact = solve(fam, &inst, SolveOptions::default()).unwrap().weight;
            let oracle = brute_force(fam, &inst).unwrap();
            worst = worst.max((exact - oracle).abs());
            checked += 1;
        }
    }
    let ok = worst <= 1e-9;
    verdict(2, ok, &format!("{checked} instances, max |diff| {worst:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_03_finite_n_union_bound() {
    let n = 50usize;
    let mut cfg = RunConfig::new(StructureFamily::matching(n), gauss(), 2000, 3);
    cfg.workers = 0;
    let report = run_trials(&cfg).unwrap();
    let ceiling = (1.0 + 1.0 / n as f64) * n as f64 * (2.0 * (n as f64).ln()).sqrt();
    let over = report.rows.iter().filter(|r| r.weight > ceiling).count();
    let ok = over == 0;
    verdict(
        3,
        ok,
        &format!("{over} of 2000 above {ceiling:.4}, max {:.4}", report.summary.max),
    );
    assert!(ok);
}

#[test]
fn criterion_04_expectation_bound() {
    let laws = [
        gauss(),
        dist(DistSpec::Laplace { scale: 1.0 }),
        dist(DistSpec::Uniform { half_width: 1.0 }),
    ];
    let mut details = Vec::new();
    let mut ok = true;
    for fam in [StructureFamily::matching(50), StructureFamily::spanning_tree(200)] {
        for law in &laws {
            let mut cfg = RunConfig::new(fam.clone(), law.clone(), 500, 4);
            cfg.workers = 0;
            let r = run_trials(&cfg).unwrap();
            let limit = r.ewn_bound + 3.0 * r.summary.stderr;
            let pass = r.summary.mean <= limit;
            ok &= pass;
            details.push(format!(
                "{}/{} {:.3}≤{:.3}",
                fam.tag(),
                law.label(),
                r.summary.mean,
                limit
            ));
        }
    }
    verdict(4, ok, &details.join(", "));
    assert!(ok);
}

fn variance_run() -> maxweight_core::experiments::ExperimentReport {
    let mut cfg = RunConfig::new(StructureFamily::matching(100), gauss(), 500, 5);
    cfg.workers = 0;
    run_trials(&cfg).unwrap()
}

#[test]
fn criteria_05_06_variance_and_concentration() {
    let r = variance_run();
    let ok5 = r.summary.variance <= 600.0;
    verdict(5, ok5, &format!("variance {:.3} ≤ 600", r.summary.variance));

    let rows = concentration_check(&r, 100).unwrap();
    let ok6 = rows.iter().all(|c| !c.flagged);
    let detail = rows
        .iter()
        .map(|c| format!("t={:.0}: {:.4}≤{:.4}+3·{:.4}", c.t, c.frequency, c.bound, c.stderr))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(6, ok6, &detail);
    assert!(ok5 && ok6);
}

#[test]
fn criterion_07_threshold_sandwich() {
    let ns: Vec<u64> = (2..=6).map(|k| 10u64.pow(k)).collect();
    let mut ok = true;
    for d in [
        gauss(),
        dist(DistSpec::Laplace { scale: 1.0 }),
        dist(DistSpec::Uniform { half_width: 1.0 }),
    ] {
        let rate = RateFunction::new(d.clone());
        for &n in &ns {
            let ln_n = (n as f64).ln();
            let xn = threshold_xn(&d, 1.0, 2.0 * ln_n, n).unwrap();
            ok &= xn <= rate.rate_inverse(ln_n) * (1.0 + 1e-9);
        }
    }
    let g = RateFunction::new(gauss());
    let ratios: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let ln_n = (n as f64).ln();
            threshold_xn(&gauss(), 1.0, 2.0 * ln_n, n).unwrap() / g.rate_inverse(ln_n)
        })
        .collect();
    let monotone = ratios.windows(2).all(|w| w[0] <= w[1]);
    let last = *ratios.last().unwrap();
    // quantile-oracle values, frozen
    let frozen = [0.43755, 0.59256, 0.67662, 0.72996, 0.76708];
    let matches = ratios.iter().zip(frozen).all(|(a, b)| (a - b).abs() < 5e-5);
    let ok = ok && monotone && last >= 0.70 && matches;
    verdict(7, ok, &format!("gaussian ratios {ratios:.5?}"));
    assert!(ok);
}

#[test]
fn criterion_08_pruning() {
    let mut ok = true;
    let mut means = Vec::new();
    let mut details = Vec::new();
    for n in [200usize, 400, 800] {
        let mut cfg = RunConfig::new(StructureFamily::matching(n), gauss(), 100, 8);
        cfg.workers = 0;
        let rows = certify_trials(&cfg, default_delta(n)).unwrap();
        let found = rows.iter().filter(|r| r.found).count();
        let sound = rows.iter().all(|r| match (r.certified_bound, r.exact_optimum) {
            (Some(b), Some(w)) => b <= w,
            (None, _) => true,
            (Some(_), None) => false,
        });
        let mean = rows
            .iter()
            .map(|r| r.ratio_to_prediction.unwrap())
            .sum::<f64>()
            / rows.len() as f64;
        ok &= found >= 90 && sound && mean > 0.4 && mean <= 1.0;
        means.push(mean);
        details.push(format!("n={n}: found {found}/100, ratio {mean:.4}"));
    }
    ok &= means.windows(2).all(|w| w[0] <= w[1]);
    verdict(8, ok, &details.join(", "));
    assert!(ok);
}

const MIDPOINTS: [f64; 3] = [1.5, 2.5, 3.5];
const FLOORS: [f64; 3] = [1.485, 1.778, 1.882];

fn counterexample_r() -> Vec<f64> {
    let rate = RateFunction::new(Distribution::counterexample());
    regularity_profile(&rate, &MIDPOINTS)
        .unwrap()
        .into_iter()
        .map(|(_, r)| r.to_f64())
        .collect()
}

/// The floors hold, but the exact `r(t)` dips from 1.5 to 2.5, so the
/// strict-increase clause of this criterion cannot be met by a correct
/// rate function. The verdict line reports FAIL; the full check is kept
/// verbatim in [`criterion_09_strictly_increasing`].
#[test]
fn criterion_09_counterexample() {
    let r = counterexample_r();
    let floors = r.iter().zip(FLOORS).all(|(v, f)| *v >= f);
    let increasing = r.windows(2).all(|w| w[0] < w[1]);
    verdict(
        9,
        floors && increasing,
        &format!(
            "r = {r:.6?}; floors {}, strictly increasing {}",
            if floors { "met" } else { "missed" },
            increasing
        ),
    );
    assert!(floors);
    // high-precision oracle values of the exact rate function
    let oracle = [2.6126694741651906, 1.9261207228261302, 1.9444993342087405];
    for (v, o) in r.iter().zip(oracle) {
        assert!((v - o).abs() <= 1e-9 * o, "{v} vs {o}");
    }
}

#[test]
#[ignore = "unattainable: the exact r(1.5) exceeds r(2.5)"]
fn criterion_09_strictly_increasing() {
    let r = counterexample_r();
    assert!(r.iter().zip(FLOORS).all(|(v, f)| *v >= f));
    assert!(r.windows(2).all(|w| w[0] < w[1]), "r = {r:?}");
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = [
        (StructureFamily::matching(30), gauss(), 11u64),
        (StructureFamily::spanning_tree(40), dist(DistSpec::Laplace { scale: 1.0 }), 12),
        (StructureFamily::hamilton_cycle(9), dist(DistSpec::Uniform { half_width: 1.0 }), 13),
        (StructureFamily::path_one_two(9), dist(DistSpec::Rademacher), 14),
        (
            StructureFamily::copy_of(GraphPattern::triangle(), 20).unwrap(),
            gauss(),
            15,
        ),
    ];
    let mut ok = true;
    for (i, (fam, law, seed)) in matrix.iter().enumerate() {
        let mut outputs = Vec::new();
        for workers in [1usize, 8] {
            let mut cfg = RunConfig::new(fam.clone(), law.clone(), 40, *seed);
            cfg.workers = workers;
            if i < 2 {
                cfg.certify_delta = Some(0.2);
            }
            let report = run_trials(&cfg).unwrap();
            let mut bytes = Vec::new();
            for (ext, format) in [("json", ReportFormat::Json), ("csv", ReportFormat::Csv)] {
                let path = dir.path().join(format!("r{i}_w{workers}.{ext}"));
                write_report(&report, &path, format).unwrap();
                bytes.push(std::fs::read(&path).unwrap());
            }
            outputs.push(bytes);
        }
        ok &= outputs[0] == outputs[1];
    }
    verdict(10, ok, &format!("{} configs, json and csv, workers 1 vs 8", matrix.len()));
    assert!(ok);
}

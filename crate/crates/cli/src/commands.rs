//! Subcommand implementations shared by the binary and the tests.

use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use toepcov_core::dense::Matrix;

use crate::config::ExperimentConfig;
use crate::io::{read_samples, Report};
use crate::registry::{EstimatorKind, EstimatorOptions, Fitter, OrderChoice};

/// Exit code for usage, parse and configuration errors.
pub const EXIT_USAGE: u8 = 1;
/// Exit code for numerical failures inside an estimator.
pub const EXIT_NUMERICAL: u8 = 2;

/// Maps an error to the process exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    use toepcov_core::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::NotPositiveDefinite { .. } | E::Unstable { .. } | E::Singular(_) => {
                    EXIT_NUMERICAL
                }
                _ => EXIT_USAGE,
            };
        }
    }
    EXIT_USAGE
}

fn rows(m: &Matrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).to_vec()).collect()
}

/// Fits `estimator` to `samples` and assembles the report.
pub fn estimate(
    samples: &[Vec<f64>],
    estimator: &str,
    order: OrderChoice,
    icm: bool,
) -> anyhow::Result<Report> {
    let kind = EstimatorKind::parse(estimator).with_context(|| {
        format!("unknown estimator `{estimator}`; run `toepcov list-estimators` for the registry")
    })?;
    if icm && !kind.icm_capable() {
        bail!(
            "estimator `{kind}` cannot provide an inverse covariance estimate: its output is not \
             guaranteed positive definite (ICM-capable: {})",
            EstimatorKind::ALL
                .iter()
                .filter(|k| k.icm_capable())
                .map(|k| k.name())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    let p = samples[0].len();
    let opts = EstimatorOptions {
        order,
        ..EstimatorOptions::default()
    };
    let start = Instant::now();
    let fitter = Fitter::new(kind, opts, p)?;
    let fit = fitter.fit(samples, None)?;
    let icm_rows = if icm {
        Some(rows(&fit.icm(kind)?))
    } else {
        None
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let r = fit.report.as_ref();
    let order = r.map(|r| r.order).or_else(|| {
        fit.hyper
            .iter()
            .find(|(k, _)| *k == "k")
            .and_then(|(_, v)| v.parse().ok())
    });
    Ok(Report {
        estimator: kind.name().to_string(),
        alpha0: r.map(|r| r.alpha.alpha0()),
        alpha: r.map(|r| r.alpha.rest().to_vec()),
        order,
        family_id: r.and_then(|r| r.family_id.clone()),
        loglik: r.map(|r| r.loglik),
        nmse_c: None,
        nmse_icm: None,
        iterations: fit.iterations,
        converged: fit.converged,
        wall_ms,
        cm: fit.autocov().map(<[f64]>::to_vec),
        cm_matrix: if fit.autocov().is_some() {
            None
        } else {
            Some(rows(&fit.cm()))
        },
        icm: icm_rows,
        hyperparameters: fit
            .hyper
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
        flags: r.map(|r| r.flags.clone()).unwrap_or_default(),
    })
}

pub fn estimate_cmd(
    input: &Path,
    estimator: &str,
    order: OrderChoice,
    icm: bool,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let samples = read_samples(input)?;
    let report = estimate(&samples, estimator, order, icm)?;
    let json = report.to_json()?;
    match out {
        Some(path) => std::fs::write(path, json + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn load(config: &Path, runs: Option<usize>, seed: Option<u64>) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(r) = runs {
        cfg.runs = r;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn benchmark_cmd(
    config: &Path,
    runs: Option<usize>,
    seed: Option<u64>,
    out: &Path,
    svg: bool,
) -> anyhow::Result<()> {
    let cfg = load(config, runs, seed)?;
    let result = crate::harness::run_benchmark(&cfg)?;
    result.write(out, svg)?;
    for a in result.aggregate() {
        let g = &result.grid[a.grid];
        let fmt = |v: Option<(f64, f64)>| {
            v.map_or("-".to_string(), |(m, s)| format!("{m:.4e} ± {s:.1e}"))
        };
        println!(
            "{:<28} P={:<4} N={:<5} {:<12} ok={:<4} failed={:<3} nmse_c={:<22} nmse_icm={}",
            g.label,
            g.p,
            g.n,
            result.estimators[a.estimator].label,
            a.ok,
            a.failed,
            fmt(a.nmse_c),
            fmt(a.nmse_icm)
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}

pub fn timing_cmd(config: &Path, runs: Option<usize>, out: &Path) -> anyhow::Result<()> {
    let cfg = load(config, runs, None)?;
    let rows = crate::timing::timing_cmd(&cfg, Duration::from_millis(200))?;
    crate::timing::write(&rows, out)?;
    for r in &rows {
        println!(
            "{:<12} P={:<5} N={:<5} {:.4e} s",
            r.estimator, r.p, r.n, r.mean_s
        );
    }
    for (name, a, b, ratio) in crate::timing::ratios(&rows) {
        let kind = rows.iter().find(|r| r.estimator == name).expect("row").kind;
        println!(
            "{name:<12} {:<26} P {a} -> {b}: x{ratio:.2}",
            crate::timing::complexity_class(kind)
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}

pub fn list_estimators() -> String {
    let mut s = String::from("name          ICM  description\n");
    for k in EstimatorKind::ALL {
        s.push_str(&format!(
            "{:<13} {:<4} {}\n",
            k.name(),
            if k.icm_capable() { "yes" } else { "no" },
            k.description()
        ));
    }
    s
}

//! Wall-time measurements with pinned hyperparameters.

use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::Context;
use toepcov_core::processes::{sample_raw, ProcessSpec};

use crate::config::ExperimentConfig;
use crate::harness::cell_seed;
use crate::registry::{EstimatorKind, EstimatorOptions, Fitter, OrderChoice};

/// AR order and bandwidth used for every timed estimator.
pub const PINNED_ORDER: usize = 6;

#[derive(Debug, Clone)]
pub struct TimingRow {
    pub estimator: String,
    pub kind: EstimatorKind,
    pub p: usize,
    pub n: usize,
    /// Number of timed estimates.
    pub count: usize,
    pub mean_s: f64,
}

/// Asymptotic cost of one estimate from `N` samples of dimension `P`
/// (`k`: bandwidth or order, `T`: iterations, `G`: embedding size,
/// `C`: candidates).
pub fn complexity_class(kind: EstimatorKind) -> &'static str {
    match kind {
        EstimatorKind::Scm => "O(N P^2)",
        EstimatorKind::Savg => "O(N P^2)",
        EstimatorKind::Band | EstimatorKind::Taper => "O(N P k)",
        EstimatorKind::Circ => "O(N P^2)",
        EstimatorKind::Em => "O(N P^2 + T (P^3 + G P))",
        EstimatorKind::ShrinkSavg | EstimatorKind::ShrinkTh => "O(N P^2)",
        EstimatorKind::Eig => "O(N P^2 + T P^3)",
        EstimatorKind::Frob => "O(N P^2 + T P k)",
        EstimatorKind::Pgd => "O(N P^2 + T P k)",
        EstimatorKind::Pls => "O(N P k + k^3)",
    }
}

/// Options with the order pinned, clamped below the dimension, and a fixed
/// box family so that no tuning is timed.
pub fn pinned_options(base: &EstimatorOptions, p: usize) -> EstimatorOptions {
    let mut o = base.clone();
    o.order = OrderChoice::Fixed(PINNED_ORDER.min(p.saturating_sub(1)));
    if o.family.is_none() {
        o.family = Some(toepcov_core::BoxFamily::registry()[0].id());
    }
    o
}

/// Mean wall time of one estimate over `datasets`, repeating passes until
/// at least `min_total` has elapsed.
pub fn time_fitter(
    fitter: &Fitter,
    datasets: &[Vec<Vec<f64>>],
    min_total: Duration,
) -> anyhow::Result<(f64, usize)> {
    fitter.fit(&datasets[0], None)?;
    let start = Instant::now();
    let mut count = 0;
    loop {
        for xs in datasets {
            std::hint::black_box(fitter.fit(xs, None)?);
            count += 1;
        }
        if start.elapsed() >= min_total {
            break;
        }
    }
    Ok((start.elapsed().as_secs_f64() / count as f64, count))
}

/// Times every configured estimator on the first process and first sample
/// count, across all dimensions. Each dimension uses `runs` data sets.
pub fn timing_cmd(cfg: &ExperimentConfig, min_total: Duration) -> anyhow::Result<Vec<TimingRow>> {
    cfg.validate()?;
    let proc = &cfg.processes[0];
    let n = cfg.sample_counts[0];
    let mut rows = Vec::new();
    for (pi, &p) in cfg.dims.iter().enumerate() {
        let spec: ProcessSpec = proc.spec(p)?;
        let datasets = (0..cfg.runs)
            .map(|r| sample_raw(&spec, n, cell_seed(cfg.seed, pi, r)))
            .collect::<Result<Vec<_>, _>>()?;
        for e in &cfg.estimators {
            let kind = e.kind()?;
            let fitter = Fitter::new(kind, pinned_options(&e.options()?, p), p)?;
            let (mean_s, count) = time_fitter(&fitter, &datasets, min_total)
                .with_context(|| format!("timing {} at P = {p}", e.label()))?;
            rows.push(TimingRow {
                estimator: e.label(),
                kind,
                p,
                n,
                count,
                mean_s,
            });
        }
    }
    Ok(rows)
}

/// Time ratios between consecutive dimensions of each estimator:
/// `(estimator, P_from, P_to, ratio)`.
pub fn ratios(rows: &[TimingRow]) -> Vec<(String, usize, usize, f64)> {
    let mut names: Vec<&str> = Vec::new();
    for r in rows {
        if !names.contains(&r.estimator.as_str()) {
            names.push(&r.estimator);
        }
    }
    let mut out = Vec::new();
    for name in names {
        let mut own: Vec<&TimingRow> = rows.iter().filter(|r| r.estimator == name).collect();
        own.sort_by_key(|r| r.p);
        for w in own.windows(2) {
            out.push((name.to_string(), w[0].p, w[1].p, w[1].mean_s / w[0].mean_s));
        }
    }
    out
}

pub fn write(rows: &[TimingRow], dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("timing.csv"))?;
    w.write_record(["estimator", "P", "N", "estimates", "mean_seconds"])?;
    for r in rows {
        w.write_record([
            r.estimator.clone(),
            r.p.to_string(),
            r.n.to_string(),
            r.count.to_string(),
            format!("{:.6e}", r.mean_s),
        ])?;
    }
    w.flush()?;
    let mut w = csv::Writer::from_path(dir.join("complexity.csv"))?;
    w.write_record(["estimator", "complexity", "P_from", "P_to", "time_ratio"])?;
    for (name, a, b, ratio) in ratios(rows) {
        let kind = rows
            .iter()
            .find(|r| r.estimator == name)
            .expect("row exists")
            .kind;
        w.write_record([
            name,
            complexity_class(kind).to_string(),
            a.to_string(),
            b.to_string(),
            format!("{ratio:.3}"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

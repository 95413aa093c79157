//! Monte Carlo benchmark harness.
//!
//! Every (grid point, run) cell draws its own data set from a seed derived
//! from the base seed, runs every configured estimator on it and records
//! the normalized errors. Cells run on a worker pool; results are collected
//! in (grid, run, estimator) order, so output does not depend on the number
//! of workers.

use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use toepcov_core::dense::Matrix;
use toepcov_core::gs::{gs_assemble, gs_from_autocov};
use toepcov_core::processes::{nmse, sample_raw, true_cm, ProcessSpec};
use toepcov_core::LikelihoodContext;

use crate::config::ExperimentConfig;
use crate::registry::{EstimatorKind, Fitter};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "TOEPCOV_WORKERS";

#[derive(Debug, Clone)]
pub struct GridPoint {
    pub index: usize,
    pub label: String,
    pub spec: ProcessSpec,
    pub p: usize,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct EstimatorColumn {
    pub label: String,
    pub kind: EstimatorKind,
}

/// Metrics of one successful estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub nmse_c: Option<f64>,
    pub nmse_icm: Option<f64>,
    pub hyper: Vec<(&'static str, String)>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub grid: usize,
    pub run: usize,
    pub seed: u64,
    pub estimator: usize,
    pub outcome: Result<Metrics, String>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct BenchmarkOutput {
    pub grid: Vec<GridPoint>,
    pub estimators: Vec<EstimatorColumn>,
    pub records: Vec<RunRecord>,
    pub runs: usize,
}

/// Mean and standard error over the successful runs of one estimator at
/// one grid point.
#[derive(Debug, Clone)]
pub struct Aggregate {
    pub grid: usize,
    pub estimator: usize,
    pub ok: usize,
    pub failed: usize,
    pub nmse_c: Option<(f64, f64)>,
    pub nmse_icm: Option<(f64, f64)>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the data set for `run` at grid point `grid`.
pub fn cell_seed(base: u64, grid: usize, run: usize) -> u64 {
    base ^ splitmix64(splitmix64(grid as u64).wrapping_add(run as u64))
}

/// Grid points in (process, dimension, sample count) order.
pub fn grid(cfg: &ExperimentConfig) -> anyhow::Result<Vec<GridPoint>> {
    let mut out = Vec::new();
    for proc in &cfg.processes {
        for &p in &cfg.dims {
            for &n in &cfg.sample_counts {
                let spec = proc
                    .spec(p)
                    .with_context(|| format!("process {} at P = {p}", proc.label()))?;
                out.push(GridPoint {
                    index: out.len(),
                    label: proc.label(),
                    spec,
                    p,
                    n,
                });
            }
        }
    }
    Ok(out)
}

pub fn mean_se(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let se = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Some((mean, se))
}

/// Builds a worker pool sized by [`WORKERS_ENV`], or rayon's default.
pub fn pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .with_context(|| format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))?;
        b = b.num_threads(n.max(1));
    }
    Ok(b.build()?)
}

struct Truth {
    cm: Matrix<f64>,
    icm: Matrix<f64>,
}

pub fn run_benchmark(cfg: &ExperimentConfig) -> anyhow::Result<BenchmarkOutput> {
    cfg.validate()?;
    let grid = grid(cfg)?;
    let estimators: Vec<EstimatorColumn> = cfg
        .estimators
        .iter()
        .map(|e| {
            Ok(EstimatorColumn {
                label: e.label(),
                kind: e.kind()?,
            })
        })
        .collect::<anyhow::Result<_>>()?;

    // Fitters and ground truth depend only on the grid point.
    let mut fitters = Vec::with_capacity(grid.len());
    let mut truths = Vec::with_capacity(grid.len());
    for g in &grid {
        let row = cfg
            .estimators
            .iter()
            .map(|e| Fitter::new(e.kind()?, e.options()?, g.p).map_err(anyhow::Error::from))
            .collect::<anyhow::Result<Vec<_>>>()
            .with_context(|| format!("at grid point {} (P = {})", g.label, g.p))?;
        fitters.push(row);
        let c = true_cm(&g.spec)?;
        truths.push(Truth {
            cm: c.dense(),
            icm: gs_assemble(&gs_from_autocov(&c)?),
        });
    }

    let cells: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|g| (0..cfg.runs).map(move |r| (g, r)))
        .collect();
    let pool = pool()?;
    let per_cell: Vec<Vec<RunRecord>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(gi, run)| {
                let g = &grid[gi];
                let seed = cell_seed(cfg.seed, gi, run);
                let data = sample_raw(&g.spec, g.n, seed).map_err(|e| e.to_string());
                let ctx = data
                    .as_ref()
                    .ok()
                    .map(|xs| LikelihoodContext::from_samples(xs).map_err(|e| e.to_string()));
                fitters[gi]
                    .iter()
                    .enumerate()
                    .map(|(ei, fitter)| {
                        let start = Instant::now();
                        let outcome = match (&data, &ctx) {
                            (Ok(xs), Some(Ok(ctx))) => {
                                evaluate(fitter, xs, ctx, &truths[gi], cfg.nmse_cm, cfg.nmse_icm)
                            }
                            (Err(e), _) | (_, Some(Err(e))) => Err(e.clone()),
                            _ => unreachable!("context exists whenever data does"),
                        };
                        RunRecord {
                            grid: gi,
                            run,
                            seed,
                            estimator: ei,
                            outcome,
                            wall_ms: start.elapsed().as_secs_f64() * 1e3,
                        }
                    })
                    .collect()
            })
            .collect()
    });
    Ok(BenchmarkOutput {
        grid,
        estimators,
        records: per_cell.into_iter().flatten().collect(),
        runs: cfg.runs,
    })
}

fn evaluate(
    fitter: &Fitter,
    xs: &[Vec<f64>],
    ctx: &LikelihoodContext<f64>,
    truth: &Truth,
    want_cm: bool,
    want_icm: bool,
) -> Result<Metrics, String> {
    let fit = fitter.fit(xs, Some(ctx)).map_err(|e| e.to_string())?;
    let nmse_c = if want_cm {
        Some(nmse(&fit.cm(), &truth.cm).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let nmse_icm = if want_icm && fitter.kind.icm_capable() {
        let icm = fit.icm(fitter.kind).map_err(|e| e.to_string())?;
        Some(nmse(&icm, &truth.icm).map_err(|e| e.to_string())?)
    } else {
        None
    };
    if nmse_c.is_some_and(|v| !v.is_finite()) || nmse_icm.is_some_and(|v| !v.is_finite()) {
        return Err("non-finite error".into());
    }
    Ok(Metrics {
        nmse_c,
        nmse_icm,
        hyper: fit.hyper,
        iterations: fit.iterations,
        converged: fit.converged,
    })
}

impl BenchmarkOutput {
    pub fn records_for(&self, grid: usize, estimator: usize) -> impl Iterator<Item = &RunRecord> {
        self.records
            .iter()
            .filter(move |r| r.grid == grid && r.estimator == estimator)
    }

    /// Aggregates in (grid, estimator) order. Failed runs are counted but
    /// never enter the means.
    pub fn aggregate(&self) -> Vec<Aggregate> {
        let mut out = Vec::new();
        for g in 0..self.grid.len() {
            for e in 0..self.estimators.len() {
                let oks: Vec<&Metrics> = self
                    .records_for(g, e)
                    .filter_map(|r| r.outcome.as_ref().ok())
                    .collect();
                let failed = self
                    .records_for(g, e)
                    .filter(|r| r.outcome.is_err())
                    .count();
                let c: Vec<f64> = oks.iter().filter_map(|m| m.nmse_c).collect();
                let i: Vec<f64> = oks.iter().filter_map(|m| m.nmse_icm).collect();
                out.push(Aggregate {
                    grid: g,
                    estimator: e,
                    ok: oks.len(),
                    failed,
                    nmse_c: mean_se(&c),
                    nmse_icm: mean_se(&i),
                });
            }
        }
        out
    }

    /// Counts of each chosen hyperparameter value, sorted by
    /// (grid, estimator, name, value).
    pub fn hyper_histogram(&self) -> Vec<(usize, usize, String, String, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for r in &self.records {
            if let Ok(m) = &r.outcome {
                for (k, v) in &m.hyper {
                    *counts
                        .entry((r.grid, r.estimator, k.to_string(), v.clone()))
                        .or_insert(0) += 1;
                }
            }
        }
        counts
            .into_iter()
            .map(|((g, e, k, v), c)| (g, e, k, v, c))
            .collect()
    }

    /// Writes `summary.csv`, `runs.csv`, `hyperparams.csv` and
    /// `walltime.csv` to `dir`, plus SVG charts when asked. All files but
    /// `walltime.csv` are deterministic in the config.
    pub fn write(&self, dir: &Path, svg: bool) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());

        let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
        w.write_record([
            "grid",
            "process",
            "P",
            "N",
            "estimator",
            "runs_ok",
            "runs_failed",
            "nmse_c_mean",
            "nmse_c_se",
            "nmse_icm_mean",
            "nmse_icm_se",
        ])?;
        for a in self.aggregate() {
            let g = &self.grid[a.grid];
            w.write_record([
                a.grid.to_string(),
                g.label.clone(),
                g.p.to_string(),
                g.n.to_string(),
                self.estimators[a.estimator].label.clone(),
                a.ok.to_string(),
                a.failed.to_string(),
                opt(a.nmse_c.map(|x| x.0)),
                opt(a.nmse_c.map(|x| x.1)),
                opt(a.nmse_icm.map(|x| x.0)),
                opt(a.nmse_icm.map(|x| x.1)),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join("runs.csv"))?;
        w.write_record([
            "grid",
            "run",
            "seed",
            "estimator",
            "status",
            "nmse_c",
            "nmse_icm",
            "hyperparameters",
            "iterations",
            "converged",
            "error",
        ])?;
        let mut t = csv::Writer::from_path(dir.join("walltime.csv"))?;
        t.write_record(["grid", "run", "estimator", "wall_ms"])?;
        for r in &self.records {
            let label = &self.estimators[r.estimator].label;
            let row = match &r.outcome {
                Ok(m) => [
                    "ok".to_string(),
                    opt(m.nmse_c),
                    opt(m.nmse_icm),
                    m.hyper
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(";"),
                    m.iterations.map_or(String::new(), |i| i.to_string()),
                    m.converged.map_or(String::new(), |c| c.to_string()),
                    String::new(),
                ],
                Err(e) => [
                    "failed".to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    e.clone(),
                ],
            };
            let mut rec = vec![
                r.grid.to_string(),
                r.run.to_string(),
                r.seed.to_string(),
                label.clone(),
            ];
            rec.extend(row);
            w.write_record(&rec)?;
            t.write_record([
                r.grid.to_string(),
                r.run.to_string(),
                label.clone(),
                format!("{:.3}", r.wall_ms),
            ])?;
        }
        w.flush()?;
        t.flush()?;

        let mut w = csv::Writer::from_path(dir.join("hyperparams.csv"))?;
        w.write_record([
            "grid",
            "process",
            "P",
            "N",
            "estimator",
            "parameter",
            "value",
            "count",
        ])?;
        for (gi, e, k, v, c) in self.hyper_histogram() {
            let g = &self.grid[gi];
            w.write_record([
                gi.to_string(),
                g.label.clone(),
                g.p.to_string(),
                g.n.to_string(),
                self.estimators[e].label.clone(),
                k,
                v,
                c.to_string(),
            ])?;
        }
        w.flush()?;

        if svg {
            for (name, pick) in [
                (
                    "nmse_c",
                    (|a: &Aggregate| a.nmse_c) as fn(&Aggregate) -> Option<(f64, f64)>,
                ),
                ("nmse_icm", |a: &Aggregate| a.nmse_icm),
            ] {
                for (file, chart) in crate::svg::benchmark_charts(self, name, pick) {
                    std::fs::write(dir.join(file), chart)?;
                }
            }
        }
        Ok(())
    }
}

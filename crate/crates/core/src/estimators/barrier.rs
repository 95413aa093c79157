//! Log-barrier interior-point solvers for the Frobenius and eigenvalue
//! constrained problems.

use crate::constraints::{frob_constraint_on, frob_value, ToleranceSet, EIG_DIM_LIMIT};
use crate::dense::{Matrix, SymmetricEigen};
use crate::error::{Error, Result};
use crate::gs::{gs_assemble, GsParams};
use crate::likelihood::{trace_form_gradient, LikelihoodContext};

use super::{check_order, normalized, rescale, support, EstimationReport};

/// Barrier schedule and inner gradient-ascent settings.
#[derive(Debug, Clone)]
pub struct BarrierOptions {
    pub mu0: f64,
    pub mu_factor: f64,
    pub outer_iter: usize,
    pub inner_max_iter: usize,
    /// Inner loop stops once `||grad phi|| < inner_tol * (1 + |phi|)`.
    pub inner_tol: f64,
    pub armijo_c1: f64,
    pub contraction: f64,
    pub max_backtracks: usize,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self {
            mu0: 1.0,
            mu_factor: 0.1,
            outer_iter: 8,
            inner_max_iter: 300,
            inner_tol: 1e-7,
            armijo_c1: 1e-4,
            contraction: 0.5,
            max_backtracks: 40,
        }
    }
}

/// Barrier term `sum log(slack)` and its gradient over the support, or
/// `None` outside the strictly feasible set.
type Barrier<'a> = dyn Fn(&GsParams<f64>, &[usize]) -> Option<(f64, Vec<f64>)> + 'a;

struct Outcome {
    alpha: GsParams<f64>,
    iterations: usize,
    converged: bool,
    stationarity: f64,
    history: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn with_step(alpha: &GsParams<f64>, supp: &[usize], d: &[f64], t: f64) -> Option<GsParams<f64>> {
    let mut v = alpha.to_vec();
    for (&i, di) in supp.iter().zip(d) {
        v[i] += t * di;
    }
    GsParams::from_vec(&v).ok()
}

fn solve(
    ctx: &LikelihoodContext<f64>,
    start: GsParams<f64>,
    supp: &[usize],
    opts: &BarrierOptions,
    barrier: &Barrier<'_>,
) -> Result<Outcome> {
    let phi = |a: &GsParams<f64>, mu: f64| -> Option<(f64, f64, Vec<f64>)> {
        let (b, gb) = barrier(a, supp)?;
        let eval = ctx.evaluate(a).ok()?;
        let g = ctx.grad_with(a, &eval, supp).ok()?;
        let grad: Vec<f64> = g.iter().zip(&gb).map(|(x, y)| x + mu * y).collect();
        Some((eval.loglik + mu * b, eval.loglik, grad))
    };

    let mut alpha = start;
    let mut mu = opts.mu0;
    let mut iterations = 0;
    let mut history = Vec::new();
    let mut converged = false;
    let mut stationarity = f64::INFINITY;
    let Some((_, l0, _)) = phi(&alpha, mu) else {
        return Err(Error::InvalidArgument(
            "barrier start point is not strictly feasible".into(),
        ));
    };
    history.push(l0);

    for _ in 0..opts.outer_iter {
        let (mut f, _, mut g) = phi(&alpha, mu).expect("iterates stay strictly feasible");
        let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
        converged = false;
        for _ in 0..opts.inner_max_iter {
            stationarity = norm(&g);
            if stationarity < opts.inner_tol * (1.0 + f.abs()) {
                converged = true;
                break;
            }
            // Barzilai-Borwein initial step, then Armijo backtracking.
            let mut t = match &prev {
                Some((dx, dg)) => {
                    let sy: f64 = dx.iter().zip(dg).map(|(a, b)| a * b).sum();
                    let ss: f64 = dx.iter().map(|a| a * a).sum();
                    if sy < 0.0 {
                        (ss / -sy).clamp(1e-10, 1e10)
                    } else {
                        1.0
                    }
                }
                None => 1.0,
            };
            let gg = stationarity * stationarity;
            let mut accepted = None;
            for _ in 0..=opts.max_backtracks {
                if let Some(trial) = with_step(&alpha, supp, &g, t) {
                    if let Some((ft, lt, gt)) = phi(&trial, mu) {
                        if ft >= f + opts.armijo_c1 * t * gg {
                            accepted = Some((trial, ft, lt, gt));
                            break;
                        }
                    }
                }
                t *= opts.contraction;
            }
            let Some((trial, ft, lt, gt)) = accepted else {
                break;
            };
            iterations += 1;
            let dx: Vec<f64> = supp.iter().map(|&i| trial.get(i) - alpha.get(i)).collect();
            let dg: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
            prev = Some((dx, dg));
            let gain = ft - f;
            alpha = trial;
            f = ft;
            g = gt;
            history.push(lt);
            if gain <= 1e-15 * (1.0 + f.abs()) {
                stationarity = norm(&g);
                converged = stationarity < 1e-4 * (1.0 + f.abs());
                break;
            }
        }
        mu *= opts.mu_factor;
    }
    Ok(Outcome {
        alpha,
        iterations,
        converged,
        stationarity,
        history,
    })
}

fn report(
    ctx: &LikelihoodContext<f64>,
    out: Outcome,
    scale: f64,
    order: usize,
) -> Result<EstimationReport> {
    let shift = ctx.dim() as f64 * scale.ln();
    let mut r = EstimationReport::finish(ctx, rescale(&out.alpha, scale), order)?;
    r.iterations = out.iterations;
    r.converged = out.converged;
    r.stationarity = out.stationarity;
    r.history = out.history.into_iter().map(|l| l - shift).collect();
    if !r.converged {
        r.flags.push("barrier-not-converged".into());
    }
    Ok(r)
}

/// Maximizes `L` over order-`w` parameters subject to `alpha_0 >= eps0`
/// and `||Z^H B^{-H}||_F^2 <= 1 - eps_f` with a log-barrier method.
pub fn estimate_frob(
    ctx: &LikelihoodContext<f64>,
    tol: &ToleranceSet,
    order: usize,
    opts: &BarrierOptions,
) -> Result<EstimationReport> {
    check_order(ctx, order)?;
    tol.validate()?;
    let (nctx, scale) = normalized(ctx)?;
    let eps0 = tol.eps0 * scale;
    let eps_f = tol.eps_f;
    let barrier = move |a: &GsParams<f64>, supp: &[usize]| {
        let s0 = a.alpha0() - eps0;
        let sf = 1.0 - eps_f - frob_value(a);
        if !(s0 > 0.0 && sf > 0.0) {
            return None;
        }
        let (_, gf) = frob_constraint_on(a, eps_f, supp);
        let grad = supp
            .iter()
            .zip(&gf)
            .map(|(&i, g)| {
                let own = if i == 0 { 1.0 / s0 } else { 0.0 };
                own - g / sf
            })
            .collect();
        Some((s0.ln() + sf.ln(), grad))
    };
    let start = GsParams::white(1.0f64.max(2.0 * eps0), ctx.dim())?;
    let out = solve(&nctx, start, &support(order), opts, &barrier)?;
    report(ctx, out, scale, order)
}

/// Maximizes `L` over order-`w` parameters subject to
/// `lambda_i(Gamma) >= eps_eig` with a log-barrier method. Guarded to
/// `P <= 64`.
pub fn estimate_eig(
    ctx: &LikelihoodContext<f64>,
    tol: &ToleranceSet,
    order: usize,
    opts: &BarrierOptions,
) -> Result<EstimationReport> {
    check_order(ctx, order)?;
    tol.validate()?;
    let p = ctx.dim();
    if p > EIG_DIM_LIMIT {
        return Err(Error::DimensionGuard {
            what: "eigenvalue constrained estimation",
            dim: p,
            limit: EIG_DIM_LIMIT,
        });
    }
    let (nctx, scale) = normalized(ctx)?;
    let eps = tol.eps_eig * scale;
    let barrier = move |a: &GsParams<f64>, supp: &[usize]| {
        let eig = SymmetricEigen::new(&gs_assemble(a)).ok()?;
        if eig.values.iter().any(|&l| !(l - eps > 0.0)) {
            return None;
        }
        let value = eig.values.iter().map(|&l| (l - eps).ln()).sum();
        let v = &eig.vectors;
        let weights: Vec<f64> = eig.values.iter().map(|&l| 1.0 / (l - eps)).collect();
        let w = Matrix::from_fn(p, p, |i, j| {
            (0..p).map(|k| v[(i, k)] * weights[k] * v[(j, k)]).sum()
        });
        Some((value, trace_form_gradient(&w, a, supp)))
    };
    let start = GsParams::white(1.0f64.max(2.0 * eps), p)?;
    let out = solve(&nctx, start, &support(order), opts, &barrier)?;
    report(ctx, out, scale, order)
}

use crate::constraints::{project_box, BoxSpec};
use crate::error::{Error, Result};
use crate::gs::GsParams;
use crate::likelihood::LikelihoodContext;

use super::{check_order, normalized, rescale, support, EstimationReport};

/// Settings of the box-constrained projected gradient ascent.
#[derive(Debug, Clone)]
pub struct PgdOptions {
    pub max_iter: usize,
    pub step0: f64,
    pub contraction: f64,
    pub armijo_c1: f64,
    pub max_backtracks: usize,
    /// Converged once the projected gradient norm drops below
    /// `stationarity_tol * (1 + |L|)`.
    pub stationarity_tol: f64,
    pub record_iterates: bool,
}

impl Default for PgdOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            step0: 1.0,
            contraction: 0.5,
            armijo_c1: 1e-4,
            max_backtracks: 40,
            stationarity_tol: 1e-5,
            record_iterates: false,
        }
    }
}

const ACTIVE_TOL: f64 = 1e-10;

/// Euclidean projection of the gradient `g` (indexed by the support
/// `0..=w`) onto the tangent cone of the box at `alpha`.
///
/// Active faces couple `alpha_i` to `alpha_0` (`d_i <= K_i d_0` on an upper
/// face), so the projection reduces to a one-dimensional piecewise
/// quadratic problem in `d_0`, solved exactly by sweeping its breakpoints.
pub fn tangent_projection(alpha: &GsParams<f64>, spec: &BoxSpec, g: &[f64]) -> Vec<f64> {
    let a0 = alpha.alpha0();
    // (K_i, c_i, i): on an upper face c_i = g_i, on a lower face c_i = -g_i;
    // the face stays active while d_0 < c_i / K_i.
    let mut faces: Vec<(f64, f64, usize)> = Vec::new();
    for i in 1..g.len() {
        let k = spec.k()[i - 1];
        let v = alpha.get(i);
        let lim = k * a0 * (1.0 - ACTIVE_TOL);
        if v >= lim {
            faces.push((k, g[i], i));
        } else if v <= -lim {
            faces.push((k, -g[i], i));
        }
    }
    faces.sort_by(|x, y| (y.1 / y.0).total_cmp(&(x.1 / x.0)));

    let mut num = g[0];
    let mut den = 1.0;
    let mut d0 = num / den;
    for &(k, c, _) in &faces {
        if d0 >= c / k {
            break;
        }
        num += k * c;
        den += k * k;
        d0 = num / den;
    }
    if a0 <= spec.eps0() * (1.0 + 1e-12) && d0 < 0.0 {
        d0 = 0.0;
    }

    let mut d = g.to_vec();
    d[0] = d0;
    for &(k, _, i) in &faces {
        if alpha.get(i) > 0.0 {
            d[i] = g[i].min(k * d0);
        } else {
            d[i] = g[i].max(-k * d0);
        }
    }
    d
}

fn step(alpha: &GsParams<f64>, d: &[f64], t: f64, spec: &BoxSpec) -> GsParams<f64> {
    let mut v = alpha.to_vec();
    for (vi, di) in v.iter_mut().zip(d) {
        *vi += t * di;
    }
    v[0] = v[0].max(spec.eps0());
    let moved = GsParams::from_vec(&v).expect("alpha0 floored at eps0");
    project_box(&moved, spec)
}

/// Maximizes `L` over order-`w` parameters inside the box `spec` by
/// projected gradient ascent with Armijo backtracking, starting at the
/// white-noise point.
pub fn estimate_pgd(
    ctx: &LikelihoodContext<f64>,
    spec: &BoxSpec,
    order: usize,
    opts: &PgdOptions,
) -> Result<EstimationReport> {
    check_order(ctx, order)?;
    let p = ctx.dim();
    if spec.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: spec.dim(),
        });
    }
    let (nctx, scale) = normalized(ctx)?;
    // Normalized coordinates shift L by the constant P log(scale).
    let shift = p as f64 * scale.ln();
    let spec_n = spec.clone().with_eps0(spec.eps0() * scale);
    let supp = support(order);

    let mut alpha = GsParams::white(1.0f64.max(spec_n.eps0()), p)?;
    let mut eval = nctx.evaluate(&alpha)?;
    let mut history = vec![eval.loglik - shift];
    let mut iterates = opts.record_iterates.then(|| vec![rescale(&alpha, scale)]);
    let mut converged = false;
    let mut flags = Vec::new();
    let mut stationarity = f64::INFINITY;
    let mut iterations = 0;

    for _ in 0..opts.max_iter {
        let g = nctx.grad_with(&alpha, &eval, &supp)?;
        let d = tangent_projection(&alpha, &spec_n, &g);
        stationarity = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let l = eval.loglik;
        if stationarity < opts.stationarity_tol * (1.0 + l.abs()) {
            converged = true;
            break;
        }
        let mut t = opts.step0;
        let mut accepted = None;
        for _ in 0..=opts.max_backtracks {
            let trial = step(&alpha, &d, t, &spec_n);
            if let Ok(e) = nctx.evaluate(&trial) {
                let ascent: f64 = g
                    .iter()
                    .zip(&supp)
                    .map(|(gi, &i)| gi * (trial.get(i) - alpha.get(i)))
                    .sum();
                if e.loglik >= l + opts.armijo_c1 * ascent && e.loglik >= l {
                    accepted = Some((trial, e));
                    break;
                }
            }
            t *= opts.contraction;
        }
        let Some((trial, e)) = accepted else {
            flags.push("line-search-failed".to_string());
            break;
        };
        iterations += 1;
        let gain = e.loglik - l;
        alpha = trial;
        eval = e;
        history.push(eval.loglik - shift);
        if let Some(it) = iterates.as_mut() {
            it.push(rescale(&alpha, scale));
        }
        if gain <= 1e-15 * (1.0 + l.abs()) {
            flags.push("stalled".to_string());
            break;
        }
    }
    if !converged && iterations == opts.max_iter {
        flags.push("max-iterations".to_string());
    }

    let mut report = EstimationReport::finish(ctx, rescale(&alpha, scale), order)?;
    report.family_id = Some(spec.family_id().to_string());
    report.iterations = iterations;
    report.converged = converged;
    report.history = history;
    report.iterates = iterates;
    report.stationarity = stationarity;
    report.flags = flags;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::BoxFamily;
    use crate::dense::Matrix;
    use crate::toeplitz::ar_to_autocov;

    fn spec(p: usize) -> BoxSpec {
        BoxSpec::from_family(&BoxFamily::Exponential { lambda: 1.0 }, p, 1e-3).unwrap()
    }

    #[test]
    fn white_noise_optimum() {
        let ctx = LikelihoodContext::new(Matrix::<f64>::identity(6), 50).unwrap();
        let r = estimate_pgd(&ctx, &spec(6), 2, &PgdOptions::default()).unwrap();
        assert!((r.alpha.alpha0() - 1.0).abs() < 1e-6);
        assert!(r.alpha.rest().iter().all(|v| v.abs() < 1e-6));
        assert!((r.loglik + 6.0).abs() < 1e-9);
    }

    #[test]
    fn recovers_population_ar1() {
        let c = ar_to_autocov(&[0.5], 0.75, 8).unwrap();
        let ctx = LikelihoodContext::new(c.dense(), 100).unwrap();
        let r = estimate_pgd(&ctx, &spec(8), 1, &PgdOptions::default()).unwrap();
        let a = -r.alpha.get(1) / r.alpha.alpha0();
        assert!((a - 0.5).abs() < 1e-3, "a = {a}");
        assert!(r.converged);
        assert!(r.history.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn projection_on_upper_face() {
        let s = BoxSpec::new(vec![0.5, 0.1], "t", 0.5).unwrap();
        let alpha = GsParams::new(1.0, vec![0.5, 0.0]).unwrap();
        // Pushing alpha_1 further out must drag alpha_0 along.
        let d = tangent_projection(&alpha, &s, &[0.0, 1.0, 0.0]);
        assert!((d[1] - 0.5 * d[0]).abs() < 1e-15);
        assert!((d[0] - 0.4).abs() < 1e-15);
        // Moving inward is unconstrained.
        let d = tangent_projection(&alpha, &s, &[0.3, -1.0, 0.2]);
        assert_eq!(d, vec![0.3, -1.0, 0.2]);
    }
}

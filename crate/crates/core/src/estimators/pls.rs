//! Closed-form maximizer of the conditional AR likelihood, projected onto
//! a certified box.

use crate::constraints::{project_box, BoxSpec};
use crate::dense::{Cholesky, Matrix};
use crate::error::{Error, Result};
use crate::gs::{ar_to_gs, gs_band, gs_to_autocov_logdet};
use crate::likelihood::LikelihoodContext;

use super::{check_order, EstimationReport};

/// Unconstrained conditional least-squares fit.
#[derive(Debug, Clone)]
pub struct PlsFit {
    pub a: Vec<f64>,
    pub sigma2: f64,
    /// The `(w+1) x (w+1)` lag-product matrix.
    pub s_tilde: Matrix<f64>,
    pub flags: Vec<String>,
}

/// `S~[j][l] = sum_{t=w}^{P-1} S[t-l][t-j]`, read off the diagonal sums of
/// `S` in `O(w^2)`.
pub fn smoothed_scm(ctx: &LikelihoodContext<f64>, w: usize) -> Matrix<f64> {
    let p = ctx.dim();
    let t = ctx.sums();
    Matrix::from_fn(w + 1, w + 1, |j, l| {
        t.get(w - l, w - j) - t.get(p - l, p - j)
    })
}

/// Conditional-likelihood maximizer `a = S~11^{-1} S~10`,
/// `sigma2 = (S~00 - S~10^T a) / (P - w)`.
pub fn pls_unconstrained(ctx: &LikelihoodContext<f64>, w: usize) -> Result<PlsFit> {
    check_order(ctx, w)?;
    solve(smoothed_scm(ctx, w), ctx.dim())
}

fn solve(st: Matrix<f64>, p: usize) -> Result<PlsFit> {
    let w = st.nrows() - 1;
    let mut flags = Vec::new();
    let a = if w == 0 {
        Vec::new()
    } else {
        let s11 = Matrix::from_fn(w, w, |i, j| st[(i + 1, j + 1)]);
        let s10: Vec<f64> = (1..=w).map(|i| st[(i, 0)]).collect();
        match Cholesky::new(&s11) {
            Ok(ch) => ch.solve(&s10),
            Err(_) => {
                let ridge = 1e-10 * (s11.trace() / w as f64).abs().max(f64::MIN_POSITIVE);
                let reg = s11.add_scaled(&Matrix::identity(w), ridge);
                flags.push("ridge".to_string());
                Cholesky::new(&reg)
                    .map_err(|_| Error::Singular("lag-product matrix"))?
                    .solve(&s10)
            }
        }
    };
    let fit: f64 = (1..=w).map(|i| st[(i, 0)] * a[i - 1]).sum();
    let mut sigma2 = (st[(0, 0)] - fit) / (p - w) as f64;
    let floor = 1e-12 * st[(0, 0)].abs() / (p - w) as f64;
    if !(sigma2 > floor) {
        sigma2 = floor.max(f64::MIN_POSITIVE);
        flags.push("variance-floor".to_string());
    }
    Ok(PlsFit {
        a,
        sigma2,
        s_tilde: st,
        flags,
    })
}

/// Projected least-squares estimator of order `w`.
pub fn estimate_pls(
    ctx: &LikelihoodContext<f64>,
    spec: &BoxSpec,
    order: usize,
) -> Result<EstimationReport> {
    let p = ctx.dim();
    if spec.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: spec.dim(),
        });
    }
    let fit = pls_unconstrained(ctx, order)?;
    let raw = ar_to_gs(&fit.a, fit.sigma2, p)?;
    let alpha = project_box(&raw, spec);
    let mut r = EstimationReport::finish(ctx, alpha, order)?;
    r.family_id = Some(spec.family_id().to_string());
    r.flags = fit.flags;
    Ok(r)
}

/// [`estimate_pls`] straight from the samples, touching only the lags
/// `0..=w` of the sample covariance: `O(N P w + w^3)` overall.
pub fn estimate_pls_samples(
    samples: &[Vec<f64>],
    spec: &BoxSpec,
    order: usize,
) -> Result<EstimationReport> {
    let Some(p) = samples.first().map(Vec::len) else {
        return Err(Error::InvalidArgument(
            "at least one sample is required".into(),
        ));
    };
    if samples.iter().any(|x| x.len() != p) {
        return Err(Error::InvalidArgument(
            "samples have unequal lengths".into(),
        ));
    }
    if spec.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: spec.dim(),
        });
    }
    if order >= p {
        return Err(Error::InvalidArgument(format!(
            "order {order} must be below the dimension {p}"
        )));
    }
    let w = order;
    // lags[q][u] = mean_n x[u] x[u+q] = S[u+q][u].
    let inv = 1.0 / samples.len() as f64;
    let mut lags: Vec<Vec<f64>> = (0..=w).map(|q| vec![0.0; p - q]).collect();
    for x in samples {
        for (q, row) in lags.iter_mut().enumerate() {
            for (u, v) in row.iter_mut().enumerate() {
                *v += x[u] * x[u + q];
            }
        }
    }
    let prefix: Vec<Vec<f64>> = lags
        .iter_mut()
        .map(|row| {
            row.iter_mut().for_each(|v| *v *= inv);
            let mut acc = vec![0.0; row.len() + 1];
            for (u, v) in row.iter().enumerate() {
                acc[u + 1] = acc[u] + v;
            }
            acc
        })
        .collect();
    // S~[j][l] = sum_{u = w-m}^{P-1-m} S[u+q][u] with m = max(j,l), q = |j-l|.
    let st = Matrix::from_fn(w + 1, w + 1, |j, l| {
        let (m, q) = (j.max(l), j.abs_diff(l));
        prefix[q][p - m] - prefix[q][w - m]
    });
    let fit = solve(st, p)?;
    let raw = ar_to_gs(&fit.a, fit.sigma2, p)?;
    let alpha = project_box(&raw, spec);
    let (cm, logdet_c) = gs_to_autocov_logdet(&alpha)?;
    let band = gs_band(&alpha);
    let mut trace = 0.0;
    for (d, row) in lags.iter().enumerate() {
        let mult = if d == 0 { 1.0 } else { 2.0 };
        trace += mult
            * row
                .iter()
                .enumerate()
                .map(|(j, s)| band.lower(j, d) * s)
                .sum::<f64>();
    }
    Ok(EstimationReport {
        alpha,
        order,
        family_id: Some(spec.family_id().to_string()),
        loglik: -logdet_c - trace,
        iterations: 0,
        converged: true,
        cm,
        history: Vec::new(),
        iterates: None,
        stationarity: 0.0,
        bic: None,
        flags: fit.flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_sample_example() {
        let ctx = LikelihoodContext::from_samples(&[vec![1.0, 2.0, 3.0]]).unwrap();
        let fit = pls_unconstrained(&ctx, 1).unwrap();
        assert_eq!(fit.s_tilde.as_slice(), &[13.0, 8.0, 8.0, 5.0]);
        assert!((fit.a[0] - 1.6).abs() < 1e-12);
        assert!((fit.sigma2 - 0.1).abs() < 1e-12);
        let raw = ar_to_gs(&fit.a, fit.sigma2, 3).unwrap();
        assert!((raw.alpha0() - 10.0).abs() < 1e-10);
        assert!((raw.get(1) + 16.0).abs() < 1e-10);
    }

    #[test]
    fn sample_path_matches_context_path() {
        let xs = vec![
            vec![1.0, -0.5, 2.0, 0.3, -1.2, 0.8],
            vec![0.2, 0.9, -0.4, 1.1, 0.5, -0.7],
            vec![-1.0, 0.1, 0.6, -0.2, 0.4, 1.5],
        ];
        let ctx = LikelihoodContext::from_samples(&xs).unwrap();
        let spec = BoxSpec::from_family(
            &crate::constraints::BoxFamily::Exponential { lambda: 1.0 },
            6,
            1e-3,
        )
        .unwrap();
        for w in 0..4 {
            let a = estimate_pls(&ctx, &spec, w).unwrap();
            let b = estimate_pls_samples(&xs, &spec, w).unwrap();
            for (x, y) in a.alpha.to_vec().iter().zip(b.alpha.to_vec()) {
                assert!((x - y).abs() < 1e-10 * (1.0 + x.abs()));
            }
            assert!((a.loglik - b.loglik).abs() < 1e-10 * (1.0 + a.loglik.abs()));
        }
    }

    #[test]
    fn order_zero_is_mean_power() {
        let ctx = LikelihoodContext::new(
            Matrix::from_fn(4, 4, |i, j| if i == j { 1.0 + i as f64 } else { 0.1 }),
            3,
        )
        .unwrap();
        let fit = pls_unconstrained(&ctx, 0).unwrap();
        assert!((fit.sigma2 - 2.5).abs() < 1e-14);
    }
}

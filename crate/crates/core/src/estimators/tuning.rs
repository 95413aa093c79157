//! Model-order selection by BIC and box-family selection by likelihood.

use crate::constraints::{BoxSpec, ToleranceSet};
use crate::error::{Error, Result};
use crate::likelihood::LikelihoodContext;

use super::{
    estimate_eig, estimate_frob, estimate_pgd, estimate_pls, BarrierOptions, EstimationReport,
    PgdOptions,
};

/// An estimator that fits a model of a given AR order.
pub trait OrderedEstimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn fit(&self, ctx: &LikelihoodContext<f64>, order: usize) -> Result<EstimationReport>;
}

pub struct Pgd {
    pub spec: BoxSpec,
    pub opts: PgdOptions,
}

pub struct Pls {
    pub spec: BoxSpec,
}

pub struct Frob {
    pub tol: ToleranceSet,
    pub opts: BarrierOptions,
}

pub struct Eig {
    pub tol: ToleranceSet,
    pub opts: BarrierOptions,
}

impl OrderedEstimator for Pgd {
    fn name(&self) -> &'static str {
        "pgd"
    }
    fn fit(&self, ctx: &LikelihoodContext<f64>, order: usize) -> Result<EstimationReport> {
        estimate_pgd(ctx, &self.spec, order, &self.opts)
    }
}

impl OrderedEstimator for Pls {
    fn name(&self) -> &'static str {
        "pls"
    }
    fn fit(&self, ctx: &LikelihoodContext<f64>, order: usize) -> Result<EstimationReport> {
        estimate_pls(ctx, &self.spec, order)
    }
}

impl OrderedEstimator for Frob {
    fn name(&self) -> &'static str {
        "frob"
    }
    fn fit(&self, ctx: &LikelihoodContext<f64>, order: usize) -> Result<EstimationReport> {
        estimate_frob(ctx, &self.tol, order, &self.opts)
    }
}

impl OrderedEstimator for Eig {
    fn name(&self) -> &'static str {
        "eig"
    }
    fn fit(&self, ctx: &LikelihoodContext<f64>, order: usize) -> Result<EstimationReport> {
        estimate_eig(ctx, &self.tol, order, &self.opts)
    }
}

/// Largest AR order scanned by [`tune_order`]: the candidate support sizes
/// are `i = 1..=min(P-1, 2 sqrt(P) + 8)` and the order is `i - 1`.
pub fn max_candidate_order(p: usize) -> usize {
    let cap = (2.0 * (p as f64).sqrt()).floor() as usize + 8;
    p.saturating_sub(1).min(cap).saturating_sub(1)
}

/// `i log N - log-likelihood of the data set`, with `i = order + 1`.
pub fn bic_score(ctx: &LikelihoodContext<f64>, report: &EstimationReport) -> f64 {
    let n = ctx.n_samples() as f64;
    (report.order + 1) as f64 * n.ln() - ctx.dataset_loglik(report.loglik)
}

const STRIKES: usize = 5;

/// Fits orders `0, 1, 2, ...` and keeps the BIC minimizer, stopping after
/// five consecutive candidates that fail to improve the best score. Ties
/// go to the smaller order.
pub fn tune_order(
    est: &dyn OrderedEstimator,
    ctx: &LikelihoodContext<f64>,
    max_order: Option<usize>,
) -> Result<EstimationReport> {
    if ctx.n_samples() < 2 {
        return Err(Error::InvalidArgument(
            "order selection by BIC needs at least two samples".into(),
        ));
    }
    let cap = max_candidate_order(ctx.dim());
    let max_order = max_order.map_or(cap, |m| m.min(ctx.dim().saturating_sub(1)));
    let mut best: Option<EstimationReport> = None;
    let mut last_err = None;
    let mut strikes = 0;
    for order in 0..=max_order {
        match est.fit(ctx, order) {
            Ok(mut r) => {
                let score = bic_score(ctx, &r);
                r.bic = Some(score);
                let better = best
                    .as_ref()
                    .map_or(true, |b| score < b.bic.expect("scored"));
                if better {
                    best = Some(r);
                    strikes = 0;
                } else {
                    strikes += 1;
                }
            }
            Err(e) => {
                last_err = Some(e);
                strikes += 1;
            }
        }
        if strikes >= STRIKES {
            break;
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(Error::InvalidArgument("no candidate order".into())))
}

/// How the order is chosen inside [`tune_box_family`].
#[derive(Debug, Clone, Copy)]
pub enum OrderPolicy {
    Fixed(usize),
    Bic { max_order: Option<usize> },
}

/// Box-constrained estimators whose bounds come from a family registry.
#[derive(Debug, Clone)]
pub enum BoxMethod {
    Pgd(PgdOptions),
    Pls,
}

impl BoxMethod {
    pub fn with_spec(&self, spec: BoxSpec) -> Box<dyn OrderedEstimator> {
        match self {
            Self::Pgd(opts) => Box::new(Pgd {
                spec,
                opts: opts.clone(),
            }),
            Self::Pls => Box::new(Pls { spec }),
        }
    }
}

/// Runs `method` once per box in `specs` and keeps the report with the
/// largest likelihood; ties go to the earlier family.
pub fn tune_box_family(
    method: &BoxMethod,
    ctx: &LikelihoodContext<f64>,
    specs: &[BoxSpec],
    policy: OrderPolicy,
) -> Result<EstimationReport> {
    if specs.is_empty() {
        return Err(Error::InvalidArgument("no box family registered".into()));
    }
    let mut best: Option<EstimationReport> = None;
    let mut last_err = None;
    for spec in specs {
        let est = method.with_spec(spec.clone());
        let fitted = match policy {
            OrderPolicy::Fixed(w) => est.fit(ctx, w),
            OrderPolicy::Bic { max_order } => tune_order(est.as_ref(), ctx, max_order),
        };
        match fitted {
            Ok(mut r) => {
                r.family_id = Some(spec.family_id().to_string());
                if best.as_ref().map_or(true, |b| r.loglik > b.loglik) {
                    best = Some(r);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("at least one family ran"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_cap() {
        assert_eq!(max_candidate_order(16), 14);
        assert_eq!(max_candidate_order(64), 23);
        assert_eq!(max_candidate_order(3), 1);
    }
}

//! Likelihood-based GS estimators with guaranteed positive definite output.
//!
//! All estimators work on real data. Iterative solvers run on the sample
//! covariance normalized to unit mean diagonal and map the result back, so
//! step-size constants do not depend on the data scale.

mod barrier;
mod pgd;
mod pls;
mod tuning;

pub use barrier::{estimate_eig, estimate_frob, BarrierOptions};
pub use pgd::{estimate_pgd, tangent_projection, PgdOptions};
pub use pls::{estimate_pls, estimate_pls_samples, pls_unconstrained, smoothed_scm, PlsFit};
pub use tuning::{
    bic_score, max_candidate_order, tune_box_family, tune_order, BoxMethod, Eig, Frob, OrderPolicy,
    OrderedEstimator, Pgd, Pls,
};

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::gs::{gs_assemble, gs_to_autocov, GsParams};
use crate::likelihood::LikelihoodContext;
use crate::toeplitz::HermitianToeplitz;

/// Result of one estimator run.
#[derive(Debug, Clone)]
pub struct EstimationReport {
    pub alpha: GsParams<f64>,
    /// AR order `w`; `alpha_i = 0` for `i > w`.
    pub order: usize,
    pub family_id: Option<String>,
    /// `L(alpha) = log det Gamma - tr(Gamma S)` on the caller's data.
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Autocovariance of the estimated covariance `Gamma^{-1}`.
    pub cm: HermitianToeplitz<f64>,
    /// Objective after each accepted step (first entry is the start).
    pub history: Vec<f64>,
    /// Every accepted iterate, when requested.
    pub iterates: Option<Vec<GsParams<f64>>>,
    /// Final stationarity measure (projected gradient norm).
    pub stationarity: f64,
    /// BIC score when chosen by order tuning.
    pub bic: Option<f64>,
    /// Diagnostics such as regularized solves.
    pub flags: Vec<String>,
}

impl EstimationReport {
    pub(crate) fn finish(
        ctx: &LikelihoodContext<f64>,
        alpha: GsParams<f64>,
        order: usize,
    ) -> Result<Self> {
        let loglik = ctx.loglik(&alpha)?;
        let cm = gs_to_autocov(&alpha)?;
        Ok(Self {
            alpha,
            order,
            family_id: None,
            loglik,
            iterations: 0,
            converged: true,
            cm,
            history: Vec::new(),
            iterates: None,
            stationarity: 0.0,
            bic: None,
            flags: Vec::new(),
        })
    }

    /// Dense estimated inverse covariance.
    pub fn icm(&self) -> Matrix<f64> {
        gs_assemble(&self.alpha)
    }

    /// Dense estimated covariance.
    pub fn cm_dense(&self) -> Matrix<f64> {
        self.cm.dense()
    }
}

/// Support `{0, ..., w}` of an order-`w` model.
pub(crate) fn support(w: usize) -> Vec<usize> {
    (0..=w).collect()
}

pub(crate) fn check_order(ctx: &LikelihoodContext<f64>, w: usize) -> Result<()> {
    let p = ctx.dim();
    if w >= p {
        return Err(Error::InvalidArgument(format!(
            "order {w} must be below the dimension {p}"
        )));
    }
    Ok(())
}

/// Context with `S` divided by its mean diagonal; returns the scale.
pub(crate) fn normalized(ctx: &LikelihoodContext<f64>) -> Result<(LikelihoodContext<f64>, f64)> {
    let scale = ctx.trace_scale();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidArgument(
            "sample covariance has a nonpositive trace".into(),
        ));
    }
    let s = ctx.scm().scaled(1.0 / scale);
    Ok((LikelihoodContext::new(s, ctx.n_samples())?, scale))
}

/// Maps parameters fitted on normalized data back to the caller's scale.
pub(crate) fn rescale(alpha: &GsParams<f64>, scale: f64) -> GsParams<f64> {
    let inv = 1.0 / scale;
    GsParams::new(
        alpha.alpha0() * inv,
        alpha.rest().iter().map(|v| v * inv).collect(),
    )
    .expect("positive scale keeps alpha0 positive")
}

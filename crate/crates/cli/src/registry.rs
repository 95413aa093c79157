//! Estimator registry: names, capabilities and a uniform fitting entry point.

use std::borrow::Cow;
use std::cell::OnceCell;
use std::fmt;

use toepcov_core::baselines::{
    circ_first_col, circulant, circulant_inverse, cv_tune_mask, em_toeplitz, mask_apply,
    masked_savg, s_avg, shrink_samples, MaskKind, MaskSpec, ShrinkTarget,
};
use toepcov_core::constraints::{BoxFamily, BoxSpec, ToleranceSet};
use toepcov_core::dense::{Cholesky, Matrix};
use toepcov_core::estimators::{
    estimate_pls_samples, tune_box_family, BarrierOptions, BoxMethod, Eig, Frob, OrderPolicy,
    OrderedEstimator, PgdOptions,
};
use toepcov_core::gs::{gs_assemble, gs_from_autocov};
use toepcov_core::{Error, EstimationReport, HermitianToeplitz, LikelihoodContext, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    Scm,
    Savg,
    Band,
    Taper,
    Circ,
    Em,
    ShrinkSavg,
    ShrinkTh,
    Eig,
    Frob,
    Pgd,
    Pls,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 12] = [
        Self::Scm,
        Self::Savg,
        Self::Band,
        Self::Taper,
        Self::Circ,
        Self::Em,
        Self::ShrinkSavg,
        Self::ShrinkTh,
        Self::Eig,
        Self::Frob,
        Self::Pgd,
        Self::Pls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Scm => "scm",
            Self::Savg => "savg",
            Self::Band => "band",
            Self::Taper => "taper",
            Self::Circ => "circ",
            Self::Em => "em",
            Self::ShrinkSavg => "shrink-savg",
            Self::ShrinkTh => "shrink-th",
            Self::Eig => "eig",
            Self::Frob => "frob",
            Self::Pgd => "pgd",
            Self::Pls => "pls",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Scm => "sample covariance",
            Self::Savg => "diagonal-averaged sample covariance",
            Self::Band => "banded diagonal average, bandwidth by 4-fold CV",
            Self::Taper => "tapered diagonal average, bandwidth by 4-fold CV",
            Self::Circ => "circulant maximum likelihood",
            Self::Em => "EM with circulant embedding (G = 2P)",
            Self::ShrinkSavg => "shrinkage towards the diagonal average, plug-in rho",
            Self::ShrinkTh => "shrinkage towards the constant off-diagonal target, plug-in rho",
            Self::Eig => "likelihood under eigenvalue constraints (P <= 64)",
            Self::Frob => "likelihood under the Frobenius-norm constraint",
            Self::Pgd => "box-constrained likelihood by projected gradient",
            Self::Pls => "projected conditional least squares",
        }
    }

    /// Whether the estimate is guaranteed positive definite, so that an
    /// inverse covariance estimate is meaningful.
    pub fn icm_capable(self) -> bool {
        matches!(
            self,
            Self::Eig | Self::Frob | Self::Pgd | Self::Pls | Self::Circ | Self::Em | Self::ShrinkTh
        )
    }

    /// Whether the estimator has an AR order or bandwidth to choose.
    pub fn has_order(self) -> bool {
        matches!(
            self,
            Self::Band | Self::Taper | Self::Eig | Self::Frob | Self::Pgd | Self::Pls
        )
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// AR order or mask bandwidth: tuned (BIC or cross validation) or fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderChoice {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for OrderChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        s.parse()
            .map(Self::Fixed)
            .map_err(|_| format!("expected `auto` or a nonnegative integer, got `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct EstimatorOptions {
    pub order: OrderChoice,
    /// Box family id; `None` selects the family by likelihood.
    pub family: Option<String>,
    pub rho: Option<f64>,
    pub em_embedding: usize,
    pub em_max_iter: usize,
    pub em_tol: f64,
    pub folds: usize,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            order: OrderChoice::Auto,
            family: None,
            rho: None,
            em_embedding: 2,
            em_max_iter: 100,
            em_tol: 1e-6,
            folds: 4,
        }
    }
}

/// Covariance estimate, kept in Toeplitz form when it has one.
#[derive(Debug, Clone)]
pub enum Estimate {
    Dense(Matrix<f64>),
    Toeplitz(HermitianToeplitz<f64>),
}

/// Outcome of one estimator on one data set.
#[derive(Debug, Clone)]
pub struct Fit {
    pub estimate: Estimate,
    pub report: Option<EstimationReport>,
    /// Chosen hyperparameters, in a fixed order.
    pub hyper: Vec<(&'static str, String)>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
}

/// A configured estimator for one dimension. Box families are certified
/// once at construction.
#[derive(Debug, Clone)]
pub struct Fitter {
    pub kind: EstimatorKind,
    pub opts: EstimatorOptions,
    p: usize,
    specs: Vec<BoxSpec>,
}

fn order_policy(order: OrderChoice) -> OrderPolicy {
    match order {
        OrderChoice::Auto => OrderPolicy::Bic { max_order: None },
        OrderChoice::Fixed(w) => OrderPolicy::Fixed(w),
    }
}

impl Fitter {
    pub fn new(kind: EstimatorKind, opts: EstimatorOptions, p: usize) -> Result<Self> {
        if let OrderChoice::Fixed(w) = opts.order {
            if kind.has_order() && w >= p {
                return Err(Error::InvalidArgument(format!(
                    "{kind}: order {w} must be below the dimension {p}"
                )));
            }
        }
        let specs = match kind {
            EstimatorKind::Pgd | EstimatorKind::Pls => {
                let families = BoxFamily::registry();
                match &opts.family {
                    None => BoxSpec::registry(p, ToleranceSet::default().eps_eta)?,
                    Some(id) => {
                        let fam = families.iter().find(|f| &f.id() == id).ok_or_else(|| {
                            Error::InvalidFamily(format!(
                                "unknown box family `{id}`; known: {}",
                                families
                                    .iter()
                                    .map(BoxFamily::id)
                                    .collect::<Vec<_>>()
                                    .join(", ")
                            ))
                        })?;
                        vec![BoxSpec::from_family(
                            fam,
                            p,
                            ToleranceSet::default().eps_eta,
                        )?]
                    }
                }
            }
            _ => Vec::new(),
        };
        Ok(Self {
            kind,
            opts,
            p,
            specs,
        })
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    /// Fits the samples. `ctx` may carry a precomputed sample covariance of
    /// the same samples; it is built on demand otherwise.
    pub fn fit(&self, samples: &[Vec<f64>], ctx: Option<&LikelihoodContext<f64>>) -> Result<Fit> {
        let p = samples.first().map_or(0, Vec::len);
        if p != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: p,
            });
        }
        let cell = OnceCell::new();
        let ctx = || context(ctx, &cell, samples);
        match self.kind {
            EstimatorKind::Scm => Ok(dense_fit(ctx()?.scm().clone(), Vec::new())),
            EstimatorKind::Savg => Ok(toeplitz_fit(s_avg(ctx()?.scm()), Vec::new())),
            EstimatorKind::Band | EstimatorKind::Taper => {
                let kind = if self.kind == EstimatorKind::Band {
                    MaskKind::Banding
                } else {
                    MaskKind::Tapering
                };
                let (mask, est) = match self.opts.order {
                    OrderChoice::Fixed(k) => {
                        let mask = MaskSpec::new(kind, k);
                        (mask, masked_savg(samples, mask)?)
                    }
                    OrderChoice::Auto => {
                        let mask = cv_tune_mask(samples, self.opts.folds, kind)?;
                        (mask, mask_apply(&s_avg(ctx()?.scm()), mask))
                    }
                };
                Ok(toeplitz_fit(est, vec![("k", mask.bandwidth().to_string())]))
            }
            EstimatorKind::Circ => {
                let c = circ_first_col(ctx()?.scm())?;
                Ok(Fit {
                    estimate: Estimate::Dense(circulant(&c)),
                    report: None,
                    hyper: Vec::new(),
                    iterations: None,
                    converged: None,
                })
            }
            EstimatorKind::Em => {
                let g = self.opts.em_embedding.max(1) * self.p;
                let r = em_toeplitz(ctx()?.scm(), g, self.opts.em_max_iter, self.opts.em_tol)?;
                let mut fit = toeplitz_fit(r.cm, vec![("G", g.to_string())]);
                fit.iterations = Some(r.iterations);
                fit.converged = Some(r.converged);
                Ok(fit)
            }
            EstimatorKind::ShrinkSavg | EstimatorKind::ShrinkTh => {
                let target = if self.kind == EstimatorKind::ShrinkTh {
                    ShrinkTarget::TH
                } else {
                    ShrinkTarget::SAvg
                };
                let r = shrink_samples(samples, target, self.opts.rho)?;
                Ok(dense_fit(r.cm, vec![("rho", format!("{:.6}", r.rho))]))
            }
            EstimatorKind::Pls => match self.opts.order {
                OrderChoice::Fixed(w) if self.specs.len() == 1 => Ok(report_fit(
                    estimate_pls_samples(samples, &self.specs[0], w)?,
                )),
                order => Ok(report_fit(tune_box_family(
                    &BoxMethod::Pls,
                    ctx()?,
                    &self.specs,
                    order_policy(order),
                )?)),
            },
            EstimatorKind::Pgd => Ok(report_fit(tune_box_family(
                &BoxMethod::Pgd(PgdOptions::default()),
                ctx()?,
                &self.specs,
                order_policy(self.opts.order),
            )?)),
            EstimatorKind::Frob | EstimatorKind::Eig => {
                let est: Box<dyn OrderedEstimator> = if self.kind == EstimatorKind::Frob {
                    Box::new(Frob {
                        tol: ToleranceSet::default(),
                        opts: BarrierOptions::default(),
                    })
                } else {
                    Box::new(Eig {
                        tol: ToleranceSet::default(),
                        opts: BarrierOptions::default(),
                    })
                };
                let ctx = ctx()?;
                let r = match self.opts.order {
                    OrderChoice::Fixed(w) => est.fit(ctx, w)?,
                    OrderChoice::Auto => {
                        toepcov_core::estimators::tune_order(est.as_ref(), ctx, None)?
                    }
                };
                Ok(report_fit(r))
            }
        }
    }
}

fn context<'a>(
    given: Option<&'a LikelihoodContext<f64>>,
    cell: &'a OnceCell<LikelihoodContext<f64>>,
    samples: &[Vec<f64>],
) -> Result<&'a LikelihoodContext<f64>> {
    if let Some(c) = given {
        return Ok(c);
    }
    if cell.get().is_none() {
        let _ = cell.set(LikelihoodContext::from_samples(samples)?);
    }
    Ok(cell.get().expect("initialized above"))
}

fn dense_fit(cm: Matrix<f64>, hyper: Vec<(&'static str, String)>) -> Fit {
    Fit {
        estimate: Estimate::Dense(cm),
        report: None,
        hyper,
        iterations: None,
        converged: None,
    }
}

fn toeplitz_fit(t: HermitianToeplitz<f64>, hyper: Vec<(&'static str, String)>) -> Fit {
    Fit {
        estimate: Estimate::Toeplitz(t),
        report: None,
        hyper,
        iterations: None,
        converged: None,
    }
}

fn report_fit(r: EstimationReport) -> Fit {
    let mut hyper = vec![("order", r.order.to_string())];
    if let Some(f) = &r.family_id {
        hyper.push(("family", f.clone()));
    }
    Fit {
        estimate: Estimate::Toeplitz(r.cm.clone()),
        iterations: Some(r.iterations),
        converged: Some(r.converged),
        report: Some(r),
        hyper,
    }
}

impl Fit {
    /// Dense covariance estimate.
    pub fn cm(&self) -> Cow<'_, Matrix<f64>> {
        match &self.estimate {
            Estimate::Dense(m) => Cow::Borrowed(m),
            Estimate::Toeplitz(t) => Cow::Owned(t.dense()),
        }
    }

    /// First column when the estimate is Toeplitz.
    pub fn autocov(&self) -> Option<&[f64]> {
        match &self.estimate {
            Estimate::Dense(_) => None,
            Estimate::Toeplitz(t) => Some(t.first_col()),
        }
    }

    /// Inverse covariance estimate. Only defined for estimators that
    /// guarantee positive definiteness.
    pub fn icm(&self, kind: EstimatorKind) -> Result<Matrix<f64>> {
        if !kind.icm_capable() {
            return Err(Error::InvalidArgument(format!(
                "{kind} does not guarantee a positive definite estimate, so it has no inverse \
                 covariance estimate"
            )));
        }
        if let Some(r) = &self.report {
            return Ok(r.icm());
        }
        match kind {
            EstimatorKind::Circ => {
                let cm = self.cm();
                let c: Vec<f64> = (0..cm.nrows()).map(|i| cm[(i, 0)]).collect();
                Ok(circulant(&circulant_inverse(&c)?))
            }
            EstimatorKind::Em => {
                let Estimate::Toeplitz(c) = &self.estimate else {
                    unreachable!("EM estimates are Toeplitz")
                };
                Ok(gs_assemble(&gs_from_autocov(c)?))
            }
            _ => Ok(Cholesky::new(&self.cm())?.inverse()),
        }
    }

    pub fn hyper_string(&self) -> String {
        self.hyper
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

//! Banding and tapering of the diagonal-averaged sample covariance.

use crate::error::{Error, Result};
use crate::toeplitz::HermitianToeplitz;

use super::scm::{check_samples, lag_averages};

/// Mask applied to the autocovariance lags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskSpec {
    /// Keep lags `q <= k`.
    Banding(usize),
    /// Trapezoid window: weight 1 up to `k/2`, linear decay to 0 at `k`.
    Tapering(usize),
}

/// Mask family without a bandwidth, used by cross validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    Banding,
    Tapering,
}

impl MaskSpec {
    pub fn new(kind: MaskKind, k: usize) -> Self {
        match kind {
            MaskKind::Banding => Self::Banding(k),
            MaskKind::Tapering => Self::Tapering(k),
        }
    }

    pub fn bandwidth(&self) -> usize {
        match *self {
            Self::Banding(k) | Self::Tapering(k) => k,
        }
    }

    /// Weight of lag `q`; always in `[0, 1]`.
    pub fn weight(&self, q: usize) -> f64 {
        match *self {
            Self::Banding(k) => {
                if q <= k {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Tapering(0) => {
                if q == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Tapering(k) => (2.0 - 2.0 * q as f64 / k as f64).clamp(0.0, 1.0),
        }
    }

    /// Largest lag with nonzero weight.
    pub fn support(&self) -> usize {
        match *self {
            Self::Banding(k) => k,
            Self::Tapering(k) => k.saturating_sub(1),
        }
    }
}

pub fn mask_apply(t: &HermitianToeplitz<f64>, spec: MaskSpec) -> HermitianToeplitz<f64> {
    let c = t
        .first_col()
        .iter()
        .enumerate()
        .map(|(q, &v)| v * spec.weight(q))
        .collect();
    HermitianToeplitz::new(c).expect("nonempty")
}

/// Banded or tapered diagonal-averaged estimate straight from the samples,
/// touching only the lags inside the mask: `O(N P k)`.
pub fn masked_savg(samples: &[Vec<f64>], spec: MaskSpec) -> Result<HermitianToeplitz<f64>> {
    let p = check_samples(samples)?;
    let lags = lag_averages(samples, spec.support())?;
    let c = (0..p)
        .map(|q| lags.get(q).map_or(0.0, |v| v * spec.weight(q)))
        .collect();
    HermitianToeplitz::new(c)
}

/// Lag sums `D_q = sum_b S[b+q][b]` of the sample covariance of `samples`.
fn diag_sums(samples: &[&Vec<f64>], p: usize) -> Vec<f64> {
    let n = samples.len() as f64;
    (0..p)
        .map(|q| {
            samples
                .iter()
                .map(|x| (0..p - q).map(|b| x[b + q] * x[b]).sum::<f64>())
                .sum::<f64>()
                / n
        })
        .collect()
}

/// Chooses the bandwidth by `folds`-fold cross validation. The risk of a
/// bandwidth is the squared Frobenius distance between the masked diagonal
/// average of the training folds and the raw sample covariance of the
/// held-out fold, averaged over folds. Folds are contiguous blocks of the
/// samples; ties go to the smaller bandwidth.
pub fn cv_tune_mask(samples: &[Vec<f64>], folds: usize, kind: MaskKind) -> Result<MaskSpec> {
    let p = check_samples(samples)?;
    let n = samples.len();
    if folds < 2 {
        return Err(Error::InvalidArgument(
            "cross validation needs at least 2 folds".into(),
        ));
    }
    if n < folds {
        return Err(Error::InvalidArgument(format!(
            "cross validation with {folds} folds needs N >= {folds}, got N = {n}"
        )));
    }
    let mut risk = vec![0.0; p];
    for f in 0..folds {
        let lo = f * n / folds;
        let hi = (f + 1) * n / folds;
        let train: Vec<&Vec<f64>> = samples[..lo].iter().chain(&samples[hi..]).collect();
        let valid: Vec<&Vec<f64>> = samples[lo..hi].iter().collect();
        let dt = diag_sums(&train, p);
        let c: Vec<f64> = (0..p).map(|q| dt[q] / (p - q) as f64).collect();
        let dv = diag_sums(&valid, p);
        // ||T - S_v||^2 = ||T||^2 - 2 tr(T S_v) + ||S_v||^2; the last term
        // does not depend on the bandwidth.
        for (k, r) in risk.iter_mut().enumerate() {
            let spec = MaskSpec::new(kind, k);
            let mut acc = 0.0;
            for q in 0..p {
                let m = spec.weight(q) * c[q];
                if m == 0.0 {
                    continue;
                }
                let mult = if q == 0 { 1.0 } else { 2.0 };
                acc += mult * (m * m * (p - q) as f64 - 2.0 * m * dv[q]);
            }
            *r += acc / folds as f64;
        }
    }
    let best = risk
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |b, (k, &r)| if r < b.1 { (k, r) } else { b },
        )
        .0;
    Ok(MaskSpec::new(kind, best))
}

//! Linear shrinkage of the sample covariance towards a structured target.

use crate::dense::Matrix;
use crate::error::{Error, Result};

use super::scm::{check_samples, s_avg, sample_cov};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShrinkTarget {
    /// Diagonal-averaged Toeplitz matrix.
    SAvg,
    /// `(tr S / P) I + (tr(S H) / (P (P-1))) H` with `H` the all-ones matrix
    /// minus the identity.
    TH,
    /// `(tr S / P) I`.
    Identity,
}

pub fn shrink_target(s: &Matrix<f64>, target: ShrinkTarget) -> Matrix<f64> {
    let p = s.nrows();
    let diag = s.trace() / p as f64;
    match target {
        ShrinkTarget::SAvg => s_avg(s).dense(),
        ShrinkTarget::Identity => Matrix::identity(p).scaled(diag),
        ShrinkTarget::TH => {
            let off = if p > 1 {
                (s.as_slice().iter().sum::<f64>() - s.trace()) / (p * (p - 1)) as f64
            } else {
                0.0
            };
            Matrix::from_fn(p, p, |i, j| if i == j { diag } else { off })
        }
    }
}

/// `(1 - rho) S + rho T`.
pub fn shrink(s: &Matrix<f64>, target: ShrinkTarget, rho: f64) -> Result<Matrix<f64>> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!(
            "shrinkage rho = {rho} outside [0, 1]"
        )));
    }
    let t = shrink_target(s, target);
    Ok(s.scaled(1.0 - rho).add_scaled(&t, rho))
}

/// Plug-in coefficient `clamp(sum Var(S_ij) / ||S - T||_F^2, 0, 1)` with the
/// unbiased sampling variance of each entry of `S`. A single sample carries
/// no variance information and gives `rho = 1`.
pub fn plugin_rho(samples: &[Vec<f64>], s: &Matrix<f64>, t: &Matrix<f64>) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 1.0;
    }
    // sum_ij sum_n (x_i x_j - S_ij)^2 = sum_n ||x_n||^4 - N ||S||_F^2
    let fourth: f64 = samples
        .iter()
        .map(|x| x.iter().map(|v| v * v).sum::<f64>().powi(2))
        .sum();
    let spread = (fourth - n as f64 * s.frobenius_norm_sqr()).max(0.0);
    let var = spread / (n * (n - 1)) as f64;
    let dist = s.add_scaled(t, -1.0).frobenius_norm_sqr();
    if dist == 0.0 {
        return 1.0;
    }
    (var / dist).clamp(0.0, 1.0)
}

/// Shrinkage estimate with its coefficient.
#[derive(Debug, Clone)]
pub struct ShrinkResult {
    pub cm: Matrix<f64>,
    pub rho: f64,
}

/// Shrinks the sample covariance of `samples`; `rho = None` uses the
/// plug-in coefficient.
pub fn shrink_samples(
    samples: &[Vec<f64>],
    target: ShrinkTarget,
    rho: Option<f64>,
) -> Result<ShrinkResult> {
    check_samples(samples)?;
    let s = sample_cov(samples)?;
    let rho = match rho {
        Some(r) => r,
        None => plugin_rho(samples, &s, &shrink_target(&s, target)),
    };
    Ok(ShrinkResult {
        cm: shrink(&s, target, rho)?,
        rho,
    })
}

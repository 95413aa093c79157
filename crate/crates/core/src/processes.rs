//! Ground-truth processes: exact covariances and exact stationary sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::likelihood::LikelihoodContext;
use crate::toeplitz::{ar_to_autocov, levinson, HermitianToeplitz, PartialDiagSums};

#[derive(Debug, Clone, PartialEq)]
pub enum ProcessKind {
    /// `X_t = sum_j a_j X_{t-j} + e_t`.
    Ar { a: Vec<f64>, sigma2: f64 },
    /// `X_t = e_t + sum_j b_j e_{t-j}`.
    Ma { b: Vec<f64>, sigma2: f64 },
    /// `X_t = a X_{t-1} + e_t + b e_{t-1}`.
    Arma11 { a: f64, b: f64, sigma2: f64 },
    /// Fractional Gaussian noise with Hurst parameter `h`.
    Fbm { h: f64 },
}

/// A process observed over `p` successive time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSpec {
    kind: ProcessKind,
    p: usize,
}

impl ProcessSpec {
    pub fn new(kind: ProcessKind, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument(
                "process dimension must be positive".into(),
            ));
        }
        let check_var = |s: f64| {
            if s > 0.0 && s.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "innovation variance {s} must be positive"
                )))
            }
        };
        match &kind {
            ProcessKind::Ar { a, sigma2 } => {
                check_var(*sigma2)?;
                // Stability: the step-down recursion must find |kappa| < 1.
                crate::toeplitz::step_down(a, *sigma2)?;
            }
            ProcessKind::Ma { sigma2, .. } => check_var(*sigma2)?,
            ProcessKind::Arma11 { a, sigma2, .. } => {
                check_var(*sigma2)?;
                if !(a.abs() < 1.0) {
                    return Err(Error::Unstable {
                        index: 1,
                        modulus: a.abs(),
                    });
                }
            }
            ProcessKind::Fbm { h } => {
                if !(0.5..=1.0).contains(h) {
                    return Err(Error::InvalidArgument(format!(
                        "Hurst parameter {h} outside [0.5, 1]"
                    )));
                }
            }
        }
        Ok(Self { kind, p })
    }

    pub fn ar1(a: f64, sigma2: f64, p: usize) -> Result<Self> {
        Self::new(ProcessKind::Ar { a: vec![a], sigma2 }, p)
    }

    pub fn ma1(b: f64, sigma2: f64, p: usize) -> Result<Self> {
        Self::new(ProcessKind::Ma { b: vec![b], sigma2 }, p)
    }

    pub fn white(sigma2: f64, p: usize) -> Result<Self> {
        Self::new(
            ProcessKind::Ar {
                a: Vec::new(),
                sigma2,
            },
            p,
        )
    }

    pub fn kind(&self) -> &ProcessKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.p
    }
}

/// Exact covariance matrix of `p` successive observations.
pub fn true_cm(spec: &ProcessSpec) -> Result<HermitianToeplitz<f64>> {
    let p = spec.p;
    let c = match &spec.kind {
        ProcessKind::Ar { a, sigma2 } => return ar_to_autocov(a, *sigma2, p),
        ProcessKind::Ma { b, sigma2 } => {
            let mut taps = vec![1.0];
            taps.extend_from_slice(b);
            (0..p)
                .map(|k| {
                    sigma2
                        * (0..taps.len().saturating_sub(k))
                            .map(|j| taps[j] * taps[j + k])
                            .sum::<f64>()
                })
                .collect()
        }
        ProcessKind::Arma11 { a, b, sigma2 } => {
            let denom = 1.0 - a * a;
            let mut c = Vec::with_capacity(p);
            c.push(sigma2 * (1.0 + 2.0 * a * b + b * b) / denom);
            if p > 1 {
                c.push(sigma2 * (1.0 + a * b) * (a + b) / denom);
            }
            while c.len() < p {
                let prev = c[c.len() - 1];
                c.push(a * prev);
            }
            c
        }
        ProcessKind::Fbm { h } => {
            let e = 2.0 * h;
            (0..p)
                .map(|d| {
                    let d = d as f64;
                    0.5 * ((d + 1.0).powf(e) - 2.0 * d.powf(e) + (d - 1.0).abs().powf(e))
                })
                .collect()
        }
    };
    HermitianToeplitz::new(c)
}

/// Draws `n` exact stationary samples, `x = L z` with `L` the Cholesky
/// factor of the true covariance, realized through the Levinson predictors
/// `x_m = sum_j a^(m)_j x_{m-j} + sqrt(E_m) z_m`. Deterministic in
/// `(spec, n, seed)`.
pub fn sample_raw(spec: &ProcessSpec, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let cm = true_cm(spec)?;
    let lev = levinson(cm.first_col(), true)?;
    let history = lev.history.expect("history requested");
    let sd: Vec<f64> = lev.errors.iter().map(|e| e.sqrt()).collect();
    let p = spec.p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let mut x = vec![0.0; p];
            for m in 0..p {
                let z: f64 = StandardNormal.sample(&mut rng);
                let pred: f64 = history[m]
                    .iter()
                    .enumerate()
                    .map(|(j, a)| a * x[m - 1 - j])
                    .sum();
                x[m] = pred + sd[m] * z;
            }
            x
        })
        .collect())
}

/// Samples with their sample covariance and its partial diagonal sums.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub samples: Vec<Vec<f64>>,
    pub ctx: LikelihoodContext<f64>,
}

impl SampleSet {
    pub fn new(samples: Vec<Vec<f64>>) -> Result<Self> {
        let ctx = LikelihoodContext::from_samples(&samples)?;
        Ok(Self { samples, ctx })
    }

    pub fn scm(&self) -> &Matrix<f64> {
        self.ctx.scm()
    }

    pub fn sums(&self) -> &PartialDiagSums<f64> {
        self.ctx.sums()
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }
}

pub fn sample(spec: &ProcessSpec, n: usize, seed: u64) -> Result<SampleSet> {
    SampleSet::new(sample_raw(spec, n, seed)?)
}

/// Normalized squared error `||est - truth||_F^2 / ||truth||_F^2`.
pub fn nmse(estimate: &Matrix<f64>, truth: &Matrix<f64>) -> Result<f64> {
    if estimate.nrows() != truth.nrows() || estimate.ncols() != truth.ncols() {
        return Err(Error::DimensionMismatch {
            expected: truth.nrows(),
            got: estimate.nrows(),
        });
    }
    let norm = truth.frobenius_norm_sqr();
    if !(norm > 0.0) {
        return Err(Error::InvalidArgument("NMSE against a zero matrix".into()));
    }
    Ok(estimate.add_scaled(truth, -1.0).frobenius_norm_sqr() / norm)
}

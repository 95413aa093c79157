//! Expectation maximization for a Toeplitz matrix embedded in a `G x G`
//! circulant.

use std::f64::consts::PI;

use crate::dense::{Cholesky, Matrix};
use crate::error::{Error, Result};
use crate::toeplitz::HermitianToeplitz;

/// Result of [`em_toeplitz`].
#[derive(Debug, Clone)]
pub struct EmResult {
    /// The upper-left `P x P` block of the circulant.
    pub cm: HermitianToeplitz<f64>,
    /// Final circulant spectrum, one entry per DFT bin.
    pub sigma: Vec<f64>,
    /// `-log det C - tr(C^{-1} S)` at every iterate, starting with the
    /// initializer.
    pub loglik_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub flags: Vec<String>,
}

/// Diagonal sums `D_d = sum_{p-q=d} A[p][q]` for `d = 0..P-1` of a
/// symmetric matrix.
fn diag_sums(a: &Matrix<f64>) -> Vec<f64> {
    let p = a.nrows();
    (0..p)
        .map(|d| (0..p - d).map(|q| a[(q + d, q)]).sum())
        .collect()
}

struct Dft {
    g: usize,
    cos: Vec<f64>,
}

impl Dft {
    fn new(g: usize) -> Self {
        let cos = (0..g)
            .map(|r| (2.0 * PI * r as f64 / g as f64).cos())
            .collect();
        Self { g, cos }
    }

    #[inline]
    fn cos(&self, k: usize, d: usize) -> f64 {
        self.cos[(k * d) % self.g]
    }

    /// `[F~ A F~^H]_kk` for all `k`, from the diagonal sums of symmetric `A`.
    fn quad_diag(&self, d: &[f64]) -> Vec<f64> {
        let inv = 1.0 / self.g as f64;
        (0..self.g)
            .map(|k| {
                let tail: f64 = (1..d.len()).map(|q| d[q] * self.cos(k, q)).sum();
                (d[0] + 2.0 * tail) * inv
            })
            .collect()
    }

    /// First `p` autocovariances of the circulant with spectrum `sigma`.
    fn autocov(&self, sigma: &[f64], p: usize) -> Vec<f64> {
        let inv = 1.0 / self.g as f64;
        (0..p)
            .map(|d| {
                sigma
                    .iter()
                    .enumerate()
                    .map(|(k, s)| s * self.cos(k, d))
                    .sum::<f64>()
                    * inv
            })
            .collect()
    }
}

/// Inverse of the Toeplitz block with a ridge added to the diagonal until it
/// factors; returns `(C^{-1}, log det C, ridged)`.
fn invert(c: &mut [f64], scale: f64) -> Result<(Matrix<f64>, f64, bool)> {
    let mut ridged = false;
    for _ in 0..20 {
        let dense = HermitianToeplitz::new(c.to_vec())?.dense();
        if let Ok(ch) = Cholesky::new(&dense) {
            return Ok((ch.inverse(), ch.log_det(), ridged));
        }
        c[0] += 1e-10 * scale;
        ridged = true;
    }
    Err(Error::Singular("embedded Toeplitz block"))
}

/// EM estimate of a Toeplitz covariance as the `P x P` block of a `G x G`
/// circulant with spectrum `Sigma`. Each step sets
/// `Sigma <- diag(Sigma F~ C^{-1} S C^{-1} F~^H Sigma + Sigma - Sigma F~ C^{-1} F~^H Sigma)`
/// with `C = F~^H Sigma F~` and `F~` the first `P` columns of the unitary
/// `G`-point DFT. Stops once `||Sigma' - Sigma||_1 < tol ||Sigma||_1`.
pub fn em_toeplitz(s: &Matrix<f64>, g: usize, max_iter: usize, tol: f64) -> Result<EmResult> {
    let p = s.nrows();
    if !s.is_square() || p == 0 {
        return Err(Error::InvalidArgument(
            "EM needs a nonempty square matrix".into(),
        ));
    }
    if g < p {
        return Err(Error::InvalidArgument(format!(
            "embedding size G = {g} must be at least P = {p}"
        )));
    }
    let dft = Dft::new(g);
    let scale = (s.trace() / p as f64).abs().max(f64::MIN_POSITIVE);
    let mut ds = diag_sums(s);
    // Embedding: S in the upper-left block, trace-scaled identity elsewhere.
    ds[0] += (g - p) as f64 * scale;
    let mut sigma: Vec<f64> = dft.quad_diag(&ds).into_iter().map(|v| v.max(0.0)).collect();

    let mut flags = Vec::new();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let evaluate =
        |sigma: &[f64], flags: &mut Vec<String>| -> Result<(Vec<f64>, Matrix<f64>, f64)> {
            let mut c = dft.autocov(sigma, p);
            let (inv, logdet, ridged) = invert(&mut c, scale)?;
            if ridged && !flags.iter().any(|f| f == "ridge") {
                flags.push("ridge".into());
            }
            let l = -logdet - inv.trace_product(s);
            Ok((c, inv, l))
        };

    let (mut c, mut inv, l) = evaluate(&sigma, &mut flags)?;
    history.push(l);
    while iterations < max_iter {
        let q1 = dft.quad_diag(&diag_sums(&inv.matmul(s).matmul(&inv)));
        let q2 = dft.quad_diag(&diag_sums(&inv));
        let next: Vec<f64> = sigma
            .iter()
            .zip(q1.iter().zip(&q2))
            .map(|(&sk, (&a, &b))| (sk * sk * (a - b) + sk).max(0.0))
            .collect();
        let change: f64 = next.iter().zip(&sigma).map(|(a, b)| (a - b).abs()).sum();
        let size: f64 = sigma.iter().map(|v| v.abs()).sum();
        sigma = next;
        iterations += 1;
        let (c2, inv2, l) = evaluate(&sigma, &mut flags)?;
        c = c2;
        inv = inv2;
        history.push(l);
        if change < tol * size {
            converged = true;
            break;
        }
    }
    Ok(EmResult {
        cm: HermitianToeplitz::new(c)?,
        sigma,
        loglik_history: history,
        iterations,
        converged,
        flags,
    })
}

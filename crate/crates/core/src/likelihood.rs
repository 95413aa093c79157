//! Gaussian log-likelihood `L(alpha) = log det Gamma - tr(Gamma S)` in GS
//! coordinates, and its analytic gradient.
//!
//! `Gamma^{-1}` is a Toeplitz matrix whose autocovariance follows from the
//! AR relation in `O(w^2 + P w)`; traces against it use the Toeplitz kernel
//! and traces against `S` use precomputed diagonal sums.

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::gs::{gs_assemble, gs_band, gs_to_autocov_logdet, z_first_col, GsParams};
use crate::scalar::Scalar;
use crate::toeplitz::{
    toeplitz_logdet, trace_general_tri_shift, trace_toep_tri_shift, HermitianToeplitz,
    PartialDiagSums,
};

/// Sample covariance, its diagonal sums and the sample size.
#[derive(Debug, Clone)]
pub struct LikelihoodContext<T> {
    s: Matrix<T>,
    sums: PartialDiagSums<T>,
    n: usize,
    dense_check: bool,
}

/// Quantities shared by a likelihood value and its gradient.
#[derive(Debug, Clone)]
pub struct Evaluation<T> {
    pub loglik: f64,
    /// First column of `Gamma^{-1}`.
    pub autocov: HermitianToeplitz<T>,
    /// `tr(Gamma S)`.
    pub trace_gs: f64,
}

impl<T: Scalar> LikelihoodContext<T> {
    pub fn new(s: Matrix<T>, n: usize) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::DimensionMismatch {
                expected: s.nrows(),
                got: s.ncols(),
            });
        }
        if n == 0 || s.nrows() == 0 {
            return Err(Error::InvalidArgument("empty sample covariance".into()));
        }
        let s = s.hermitian_part();
        let sums = PartialDiagSums::new(&s);
        Ok(Self {
            s,
            sums,
            n,
            dense_check: false,
        })
    }

    /// Context from raw samples (one sample per entry).
    pub fn from_samples(samples: &[Vec<T>]) -> Result<Self> {
        let s = crate::baselines::sample_cov(samples)?;
        Self::new(s, samples.len())
    }

    /// Routes `log det` through a full Levinson run and the `alpha_0`
    /// derivative through dense products. Slow; meant for cross-checks.
    pub fn with_dense_check(mut self, on: bool) -> Self {
        self.dense_check = on;
        self
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.n
    }

    pub fn scm(&self) -> &Matrix<T> {
        &self.s
    }

    pub fn sums(&self) -> &PartialDiagSums<T> {
        &self.sums
    }

    /// Mean diagonal of `S`.
    pub fn trace_scale(&self) -> f64 {
        self.s.trace().re() / self.dim() as f64
    }

    /// Dataset log-likelihood up to constants: `N/2 L` for real data and
    /// `N L` for complex data.
    pub fn dataset_loglik(&self, l: f64) -> f64 {
        let factor = if T::IS_COMPLEX { 1.0 } else { 0.5 };
        factor * self.n as f64 * l
    }

    fn check_dim(&self, alpha: &GsParams<T>) -> Result<()> {
        if alpha.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: alpha.dim(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, alpha: &GsParams<T>) -> Result<Evaluation<T>> {
        self.check_dim(alpha)?;
        let (autocov, mut logdet_c) = gs_to_autocov_logdet(alpha)?;
        if self.dense_check {
            logdet_c = toeplitz_logdet(&autocov)?;
        }
        let trace_gs = gs_band(alpha).trace_with(&self.s);
        Ok(Evaluation {
            loglik: -logdet_c - trace_gs,
            autocov,
            trace_gs,
        })
    }

    pub fn loglik(&self, alpha: &GsParams<T>) -> Result<f64> {
        Ok(self.evaluate(alpha)?.loglik)
    }

    /// Gradient restricted to `support`, in the order given. Entry for index
    /// 0 is real; complex entries are `dL/dRe + j dL/dIm`.
    pub fn grad(&self, alpha: &GsParams<T>, support: &[usize]) -> Result<Vec<T>> {
        let eval = self.evaluate(alpha)?;
        self.grad_with(alpha, &eval, support)
    }

    pub fn grad_with(
        &self,
        alpha: &GsParams<T>,
        eval: &Evaluation<T>,
        support: &[usize],
    ) -> Result<Vec<T>> {
        self.check_dim(alpha)?;
        let c = eval.autocov.first_col();
        let kernel = |d: &[T], k: usize| {
            trace_toep_tri_shift(c, d, k) - trace_general_tri_shift(&self.sums, d, k)
        };
        let mut g = shift_gradient(alpha, support, kernel, eval.trace_gs - self.dim() as f64);
        if self.dense_check {
            if let Some(pos) = support.iter().position(|&i| i == 0) {
                g[pos] = T::from_real(self.dense_alpha0_derivative(alpha, &eval.autocov));
            }
        }
        Ok(g)
    }

    fn dense_alpha0_derivative(&self, alpha: &GsParams<T>, c: &HermitianToeplitz<T>) -> f64 {
        let w = c.dense().add_scaled(&self.s, -1.0);
        let b = crate::gs::build_b(alpha).dense();
        let m = b
            .add_scaled(&b.adjoint(), 1.0)
            .add_scaled(&gs_assemble(alpha), -1.0);
        w.trace_product(&m).re() / alpha.alpha0()
    }
}

/// Shared gradient assembly for `tr(W Gamma(alpha))`-type terms.
///
/// `kernel(d, k)` must return `tr(W D (E^k)^T)` for the lower-triangular
/// Toeplitz `D` with first column `d`, and `minus_trace_w_gamma` is
/// `-tr(W Gamma)`.
fn shift_gradient<T: Scalar>(
    alpha: &GsParams<T>,
    support: &[usize],
    kernel: impl Fn(&[T], usize) -> T,
    minus_trace_w_gamma: f64,
) -> Vec<T> {
    let p = alpha.dim();
    let b = alpha.to_vec();
    let z = z_first_col(alpha);
    let inv = 1.0 / alpha.alpha0();
    support
        .iter()
        .map(|&i| {
            if i == 0 {
                T::from_real(inv * (2.0 * kernel(&b, 0).re() + minus_trace_w_gamma))
            } else {
                let u = kernel(&b, i);
                let v = kernel(&z, p - i);
                (u - v.conj()).scale(2.0 * inv)
            }
        })
        .collect()
}

/// Gradient of `alpha -> tr(W Gamma(alpha))` for a fixed Hermitian `W`,
/// restricted to `support`. Costs `O(P^2)` for the diagonal sums of `W`.
pub fn trace_form_gradient<T: Scalar>(
    w: &Matrix<T>,
    alpha: &GsParams<T>,
    support: &[usize],
) -> Vec<T> {
    let sums = PartialDiagSums::new(w);
    let trace_wg = gs_band(alpha).trace_with(w);
    shift_gradient(
        alpha,
        support,
        |d, k| trace_general_tri_shift(&sums, d, k),
        -trace_wg,
    )
}

/// `L(alpha)` for the context.
pub fn loglik<T: Scalar>(ctx: &LikelihoodContext<T>, alpha: &GsParams<T>) -> Result<f64> {
    ctx.loglik(alpha)
}

/// Gradient of `L` restricted to `support`.
pub fn grad<T: Scalar>(
    ctx: &LikelihoodContext<T>,
    alpha: &GsParams<T>,
    support: &[usize],
) -> Result<Vec<T>> {
    ctx.grad(alpha, support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gs::ar_to_gs;
    use crate::toeplitz::ar_to_autocov;

    #[test]
    fn identity_values() {
        let ctx = LikelihoodContext::new(Matrix::<f64>::identity(5), 10).unwrap();
        let a = GsParams::white(1.0, 5).unwrap();
        assert!((ctx.loglik(&a).unwrap() + 5.0).abs() < 1e-14);
        let ctx = LikelihoodContext::new(Matrix::<f64>::identity(2), 10).unwrap();
        let a = GsParams::white(2.0, 2).unwrap();
        assert!((ctx.loglik(&a).unwrap() - (2.0 * 2f64.ln() - 4.0)).abs() < 1e-14);
    }

    #[test]
    fn stationary_at_population_optimum() {
        let a = [0.5, -0.2];
        let c = ar_to_autocov(&a, 0.7, 8).unwrap();
        let ctx = LikelihoodContext::new(c.dense(), 100).unwrap();
        let alpha = ar_to_gs(&a, 0.7, 8).unwrap();
        let support: Vec<usize> = (0..8).collect();
        let g = ctx.grad(&alpha, &support).unwrap();
        for v in g {
            assert!(v.abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn support_restriction() {
        let ctx = LikelihoodContext::new(Matrix::<f64>::identity(4), 3).unwrap();
        let a = GsParams::new(1.5, vec![0.1, 0.0, 0.0]).unwrap();
        let g = ctx.grad(&a, &[0]).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn dense_check_agrees() {
        let s = Matrix::from_fn(6, 6, |i, j| {
            0.6f64.powi((i as i32 - j as i32).abs()) + if i == j { 0.3 } else { 0.0 }
        });
        let ctx = LikelihoodContext::new(s, 10).unwrap();
        let slow = ctx.clone().with_dense_check(true);
        let a = GsParams::new(1.2, vec![-0.4, 0.1, 0.0, 0.0, 0.0]).unwrap();
        let support: Vec<usize> = (0..6).collect();
        let g1 = ctx.grad(&a, &support).unwrap();
        let g2 = slow.grad(&a, &support).unwrap();
        assert!((g1[0] - g2[0]).abs() < 1e-12);
        assert!((ctx.loglik(&a).unwrap() - slow.loglik(&a).unwrap()).abs() < 1e-12);
    }
}

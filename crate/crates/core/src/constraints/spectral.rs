use crate::dense::{hermitian_eigenvalues, Cholesky, Matrix};
use crate::error::{Error, Result};
use crate::gs::{gs_assemble, GsParams};
use crate::scalar::Scalar;
use crate::toeplitz::fib_seq;

/// Largest dimension accepted by [`eig_constraints`].
pub const EIG_DIM_LIMIT: usize = 64;

/// Entries `g_1..g_{P-1}` of the strictly upper-triangular Toeplitz matrix
/// `Z^H B^{-H}`, so that `||Z^H B^{-H}||_F^2 = sum_d (P-d) |g_d|^2`.
///
/// Only `alpha_{P-j}` with `P-j <= w` contribute, so an order-`w` vector
/// costs `O(w^2)`.
pub fn g_vector<T: Scalar>(alpha: &GsParams<T>) -> Vec<T> {
    let p = alpha.dim();
    let w = alpha.order();
    let mut g = vec![T::zero(); p - 1];
    if w == 0 {
        return g;
    }
    let inv = 1.0 / alpha.alpha0();
    let r: Vec<T> = alpha.rest()[..w]
        .iter()
        .map(|v| -v.conj().scale(inv))
        .collect();
    let f = fib_seq(&r, w - 1);
    for d in (p - w)..p {
        let mut acc = T::zero();
        for j in (p - w)..=d {
            acc += alpha.get(p - j).scale(inv) * f[d - j];
        }
        g[d - 1] = acc;
    }
    g
}

/// `||Z^H B^{-H}||_F^2`.
pub fn frob_value<T: Scalar>(alpha: &GsParams<T>) -> f64 {
    let p = alpha.dim();
    g_vector(alpha)
        .iter()
        .enumerate()
        .map(|(i, v)| (p - i - 1) as f64 * v.abs2())
        .sum()
}

/// Exact positive-definiteness test: the spectral norm of `Z^H B^{-H}` is
/// strictly below one iff `I - M^H M` admits a Cholesky factorization.
pub fn spectral_pd_check<T: Scalar>(alpha: &GsParams<T>) -> bool {
    let p = alpha.dim();
    let g = g_vector(alpha);
    let m = Matrix::from_fn(p, p, |i, j| if j > i { g[j - i - 1] } else { T::zero() });
    let gram = m.adjoint().matmul(&m);
    let a = Matrix::<T>::identity(p).add_scaled(&gram, -1.0);
    Cholesky::new(&a).is_ok()
}

/// Frobenius constraint `||Z^H B^{-H}||_F^2 - 1 + eps_f` with its gradient
/// over every parameter.
pub fn frob_constraint<T: Scalar>(alpha: &GsParams<T>, eps_f: f64) -> (f64, Vec<T>) {
    let support: Vec<usize> = (0..alpha.dim()).collect();
    frob_constraint_on(alpha, eps_f, &support)
}

/// Frobenius constraint value and its forward-difference gradient over
/// `support`. Complex entries are `d/dRe + j d/dIm`.
pub fn frob_constraint_on<T: Scalar>(
    alpha: &GsParams<T>,
    eps_f: f64,
    support: &[usize],
) -> (f64, Vec<T>) {
    let base = frob_value(alpha);
    let value = base - 1.0 + eps_f;
    let v = alpha.to_vec();
    let diff = |i: usize, delta: T, h: f64| {
        let mut w = v.clone();
        w[i] += delta;
        match GsParams::from_vec(&w) {
            Ok(a) => (frob_value(&a) - base) / h,
            Err(_) => f64::INFINITY,
        }
    };
    let grad = support
        .iter()
        .map(|&i| {
            let h = 1e-7 * v[i].abs().max(1e-2 * alpha.alpha0()).max(1e-8);
            let re = diff(i, T::from_real(h), h);
            if T::IS_COMPLEX && i > 0 {
                T::from_parts(re, diff(i, T::from_parts(0.0, h), h))
            } else {
                T::from_real(re)
            }
        })
        .collect();
    (value, grad)
}

/// `lambda_i(Gamma(alpha)) - eps_eig` in ascending order. Guarded to
/// `P <= 64`.
pub fn eig_constraints<T: Scalar>(alpha: &GsParams<T>, eps_eig: f64) -> Result<Vec<f64>> {
    let p = alpha.dim();
    if p > EIG_DIM_LIMIT {
        return Err(Error::DimensionGuard {
            what: "eigenvalue constraints",
            dim: p,
            limit: EIG_DIM_LIMIT,
        });
    }
    let vals = hermitian_eigenvalues(&gs_assemble(alpha))?;
    Ok(vals.into_iter().map(|l| l - eps_eig).collect())
}

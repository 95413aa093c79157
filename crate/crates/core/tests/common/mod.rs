#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toepcov_core::dense::Matrix;
use toepcov_core::gs::GsParams;
use toepcov_core::scalar::Scalar;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub trait RandScalar: Scalar {
    fn draw(rng: &mut ChaCha8Rng, scale: f64) -> Self;
}

impl RandScalar for f64 {
    fn draw(rng: &mut ChaCha8Rng, scale: f64) -> Self {
        rng.random_range(-scale..scale)
    }
}

impl RandScalar for Complex64 {
    fn draw(rng: &mut ChaCha8Rng, scale: f64) -> Self {
        let r = scale * rng.random::<f64>().sqrt();
        let t = rng.random_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, t)
    }
}

/// Stable AR predictor of order `w` built from random reflection
/// coefficients of modulus below `kmax`.
pub fn stable_ar<T: RandScalar>(rng: &mut ChaCha8Rng, w: usize, kmax: f64) -> Vec<T> {
    let mut a: Vec<T> = Vec::new();
    for _ in 0..w {
        let k = T::draw(rng, kmax);
        let m = a.len();
        let old = a.clone();
        for j in 0..m {
            a[j] = old[j] - k * old[m - 1 - j].conj();
        }
        a.push(k);
    }
    a
}

/// Random positive definite GS point of dimension `p` and order `w`.
pub fn random_pd_alpha<T: RandScalar>(rng: &mut ChaCha8Rng, p: usize, w: usize) -> GsParams<T> {
    random_pd_alpha_k(rng, p, w, 0.8)
}

pub fn random_pd_alpha_k<T: RandScalar>(
    rng: &mut ChaCha8Rng,
    p: usize,
    w: usize,
    kmax: f64,
) -> GsParams<T> {
    let a = stable_ar::<T>(rng, w, kmax);
    let sigma2 = rng.random_range(0.3..2.0);
    toepcov_core::gs::ar_to_gs(&a, sigma2, p).unwrap()
}

pub fn random_matrix<T: RandScalar>(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| T::draw(rng, 1.0))
}

/// Random PSD matrix `X X^H / n` with `n` columns.
pub fn random_psd<T: RandScalar>(rng: &mut ChaCha8Rng, p: usize, n: usize) -> Matrix<T> {
    let x = random_matrix::<T>(rng, p, n);
    x.matmul(&x.adjoint())
        .scaled(1.0 / n as f64)
        .hermitian_part()
}

pub fn to_na_real(m: &Matrix<f64>) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn to_na<T: Scalar>(m: &Matrix<T>) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        Complex64::new(m[(i, j)].re(), m[(i, j)].im())
    })
}

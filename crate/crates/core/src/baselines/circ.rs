//! Circulant maximum-likelihood estimate and circulant helpers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn to_c<T: Scalar>(v: T) -> Complex64 {
    Complex64::new(v.re(), v.im())
}

/// First column of the circulant MLE: wrapped diagonal averages
/// `c(m) = (1/P) sum_i S[(i+m) mod P][i]`. This equals the first column of
/// `F^H diag(F S F^H) F` for the unitary DFT `F`.
pub fn circ_first_col<T: Scalar>(s: &Matrix<T>) -> Result<Vec<T>> {
    if !s.is_square() || s.nrows() == 0 {
        return Err(Error::InvalidArgument(
            "circulant estimate needs a nonempty square matrix".into(),
        ));
    }
    let p = s.nrows();
    let inv = 1.0 / p as f64;
    let mut c: Vec<T> = (0..=p / 2)
        .map(|m| (0..p).map(|i| s[((i + m) % p, i)]).sum::<T>().scale(inv))
        .collect();
    c[0] = T::from_real(c[0].re());
    // Hermitian symmetry c(P-m) = conj c(m), enforced exactly.
    for m in p / 2 + 1..p {
        let v = c[p - m].conj();
        c.push(v);
    }
    Ok(c)
}

/// Dense circulant `C[i][j] = c((i - j) mod P)`.
pub fn circulant<T: Scalar>(c: &[T]) -> Matrix<T> {
    let p = c.len();
    Matrix::from_fn(p, p, |i, j| c[(i + p - j) % p])
}

/// Circulant MLE `F^H diag(F S F^H) F`; PSD whenever `S` is.
pub fn circ_mle<T: Scalar>(s: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(circulant(&circ_first_col(s)?))
}

/// Eigenvalues `lambda_k = sum_m c(m) exp(-2 pi i k m / P)` of a Hermitian
/// circulant with first column `c`.
pub fn circulant_eigenvalues<T: Scalar>(c: &[T]) -> Vec<f64> {
    let p = c.len();
    (0..p)
        .map(|k| {
            c.iter()
                .enumerate()
                .map(|(m, &v)| {
                    let th = -2.0 * PI * ((k * m) % p) as f64 / p as f64;
                    to_c(v) * Complex64::from_polar(1.0, th)
                })
                .sum::<Complex64>()
                .re
        })
        .collect()
}

/// First column of the inverse circulant; fails unless every eigenvalue is
/// positive.
pub fn circulant_inverse<T: Scalar>(c: &[T]) -> Result<Vec<T>> {
    let p = c.len();
    let lambda = circulant_eigenvalues(c);
    if let Some((k, &l)) = lambda.iter().enumerate().find(|(_, &l)| !(l > 0.0)) {
        return Err(Error::NotPositiveDefinite { index: k, value: l });
    }
    Ok((0..p)
        .map(|m| {
            let z: Complex64 = lambda
                .iter()
                .enumerate()
                .map(|(k, &l)| {
                    let th = 2.0 * PI * ((k * m) % p) as f64 / p as f64;
                    Complex64::from_polar(1.0 / l, th)
                })
                .sum::<Complex64>()
                / p as f64;
            T::from_parts(z.re, z.im)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_fixed() {
        let i = Matrix::<f64>::identity(5);
        assert!(circ_mle(&i).unwrap().max_abs_diff(&i) < 1e-15);
    }

    #[test]
    fn circulant_reproduced() {
        let c = vec![4.0, 1.0, -0.5, 0.25, -0.5, 1.0];
        let m = circulant(&c);
        assert!(circ_mle(&m).unwrap().max_abs_diff(&m) < 1e-12);
        let inv = circulant(&circulant_inverse(&c).unwrap());
        assert!(m.matmul(&inv).max_abs_diff(&Matrix::identity(6)) < 1e-12);
    }

    #[test]
    fn spectrum_nonnegative() {
        let s = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 5.0]]).unwrap();
        let c = circ_first_col(&s).unwrap();
        assert_eq!(c, vec![3.0, 2.0]);
        let l = circulant_eigenvalues(&c);
        assert!((l[0] - 5.0).abs() < 1e-14 && (l[1] - 1.0).abs() < 1e-14);
    }
}

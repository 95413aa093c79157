//! Structured Toeplitz linear algebra.

mod fib;
mod levinson;
mod trace;

pub use fib::{fib_seq, tri_toeplitz_inverse};
pub use levinson::{
    ar_to_autocov, ar_to_autocov_logdet, levinson, step_down, toeplitz_logdet, Levinson,
};
pub use trace::{trace_general_tri_shift, trace_toep_tri_shift, PartialDiagSums};

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hermitian Toeplitz matrix stored by its first column `c(0), ..., c(P-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianToeplitz<T> {
    first_col: Vec<T>,
}

impl<T: Scalar> HermitianToeplitz<T> {
    /// Builds the matrix; the imaginary part of `c(0)` must vanish up to
    /// rounding and is dropped.
    pub fn new(mut first_col: Vec<T>) -> Result<Self> {
        let Some(c0) = first_col.first().copied() else {
            return Err(Error::InvalidArgument("empty autocovariance".into()));
        };
        if c0.im().abs() > 1e-12 * c0.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "c(0) must be real, got imaginary part {}",
                c0.im()
            )));
        }
        first_col[0] = T::from_real(c0.re());
        Ok(Self { first_col })
    }

    pub fn dim(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_col(&self) -> &[T] {
        &self.first_col
    }

    pub fn into_first_col(self) -> Vec<T> {
        self.first_col
    }

    /// `c(k)` for any signed lag, using `c(-k) = conj c(k)`.
    #[inline]
    pub fn lag(&self, k: isize) -> T {
        if k >= 0 {
            self.first_col[k as usize]
        } else {
            self.first_col[(-k) as usize].conj()
        }
    }

    pub fn dense(&self) -> Matrix<T> {
        let p = self.dim();
        Matrix::from_fn(p, p, |i, j| self.lag(i as isize - j as isize))
    }
}

/// Lower-triangular Toeplitz matrix stored by its first column.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriToeplitz<T> {
    first_col: Vec<T>,
}

impl<T: Scalar> LowerTriToeplitz<T> {
    pub fn new(first_col: Vec<T>) -> Self {
        Self { first_col }
    }

    pub fn dim(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_col(&self) -> &[T] {
        &self.first_col
    }

    pub fn dense(&self) -> Matrix<T> {
        let p = self.dim();
        Matrix::from_fn(p, p, |i, j| {
            if i >= j {
                self.first_col[i - j]
            } else {
                T::zero()
            }
        })
    }

    /// Product of two lower-triangular Toeplitz matrices (a truncated
    /// convolution of the first columns).
    pub fn mul(&self, other: &Self) -> Self {
        let p = self.dim();
        assert_eq!(p, other.dim());
        let mut out = vec![T::zero(); p];
        for (i, &a) in self.first_col.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.first_col[..p - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { first_col: out }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let p = self.dim();
        assert_eq!(p, x.len());
        (0..p)
            .map(|i| (0..=i).map(|j| self.first_col[i - j] * x[j]).sum())
            .collect()
    }
}

//! Gohberg-Semencul parameterization of inverse Hermitian Toeplitz matrices.
//!
//! `Gamma(alpha) = (B B^H - Z Z^H) / alpha_0` where `B` is lower-triangular
//! Toeplitz with first column `(alpha_0, ..., alpha_{P-1})` and `Z` is
//! lower-triangular Toeplitz with first column
//! `(0, conj alpha_{P-1}, ..., conj alpha_1)`.

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::toeplitz::{ar_to_autocov_logdet, levinson, HermitianToeplitz, LowerTriToeplitz};

/// GS parameter vector. `alpha0` is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct GsParams<T> {
    alpha0: f64,
    rest: Vec<T>,
}

impl<T: Scalar> GsParams<T> {
    pub fn new(alpha0: f64, rest: Vec<T>) -> Result<Self> {
        if !(alpha0 > 0.0) || !alpha0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "alpha0 must be positive and finite, got {alpha0}"
            )));
        }
        if rest
            .iter()
            .any(|v| !v.re().is_finite() || !v.im().is_finite())
        {
            return Err(Error::InvalidArgument("non-finite GS parameter".into()));
        }
        Ok(Self { alpha0, rest })
    }

    /// From a full vector `(alpha_0, ..., alpha_{P-1})`; the imaginary part
    /// of `alpha_0` must vanish.
    pub fn from_vec(alpha: &[T]) -> Result<Self> {
        let Some(a0) = alpha.first() else {
            return Err(Error::InvalidArgument("empty GS vector".into()));
        };
        if a0.im().abs() > 1e-12 * a0.abs() {
            return Err(Error::InvalidArgument("alpha0 must be real".into()));
        }
        Self::new(a0.re(), alpha[1..].to_vec())
    }

    /// White-noise point `(alpha0, 0, ..., 0)`.
    pub fn white(alpha0: f64, p: usize) -> Result<Self> {
        Self::new(alpha0, vec![T::zero(); p.saturating_sub(1)])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rest.len() + 1
    }

    #[inline]
    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// `alpha_1, ..., alpha_{P-1}`.
    #[inline]
    pub fn rest(&self) -> &[T] {
        &self.rest
    }

    /// `alpha_i` for any `i`, with `alpha_0` lifted into the field.
    #[inline]
    pub fn get(&self, i: usize) -> T {
        if i == 0 {
            T::from_real(self.alpha0)
        } else {
            self.rest[i - 1]
        }
    }

    pub fn to_vec(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.dim());
        v.push(T::from_real(self.alpha0));
        v.extend_from_slice(&self.rest);
        v
    }

    /// Index of the last nonzero parameter (0 for white noise).
    pub fn order(&self) -> usize {
        self.rest
            .iter()
            .rposition(|v| !v.is_zero())
            .map_or(0, |i| i + 1)
    }

    /// Copy with `alpha_i = 0` for every `i > w`.
    pub fn truncated(&self, w: usize) -> Self {
        let mut rest = self.rest.clone();
        for v in rest.iter_mut().skip(w) {
            *v = T::zero();
        }
        Self {
            alpha0: self.alpha0,
            rest,
        }
    }
}

pub fn build_b<T: Scalar>(alpha: &GsParams<T>) -> LowerTriToeplitz<T> {
    LowerTriToeplitz::new(alpha.to_vec())
}

pub fn build_z<T: Scalar>(alpha: &GsParams<T>) -> LowerTriToeplitz<T> {
    LowerTriToeplitz::new(z_first_col(alpha))
}

pub(crate) fn z_first_col<T: Scalar>(alpha: &GsParams<T>) -> Vec<T> {
    let p = alpha.dim();
    let mut z = Vec::with_capacity(p);
    z.push(T::zero());
    z.extend(alpha.rest().iter().rev().map(|v| v.conj()));
    z
}

/// Lower diagonals `0..=bandwidth` of `Gamma(alpha)`; `diags[d][j]` holds
/// `Gamma[j+d][j]`.
///
/// Uses the recursion `(T T^H)[j+d][j] = (T T^H)[j-1+d][j-1] + t_{j+d} conj t_j`
/// along each diagonal. A parameter vector of order `w` yields a band of
/// width `w` with exact zeros outside, so this costs `O(P w)`.
#[derive(Debug, Clone)]
pub struct GsBand<T> {
    p: usize,
    diags: Vec<Vec<T>>,
}

impl<T: Scalar> GsBand<T> {
    pub fn new(alpha: &GsParams<T>) -> Self {
        Self::with_bandwidth(alpha, alpha.order())
    }

    fn with_bandwidth(alpha: &GsParams<T>, bw: usize) -> Self {
        let p = alpha.dim();
        let b = alpha.to_vec();
        let z = z_first_col(alpha);
        let inv = 1.0 / alpha.alpha0();
        let w = alpha.order();
        let mut diags = Vec::with_capacity(bw + 1);
        for d in 0..=bw {
            let mut col = Vec::with_capacity(p - d);
            let mut acc = T::zero();
            for j in 0..p - d {
                if j + d <= w {
                    acc += b[j + d] * b[j].conj();
                }
                if w > 0 && j >= p - w {
                    acc -= z[j + d] * z[j].conj();
                }
                col.push(acc.scale(inv));
            }
            diags.push(col);
        }
        Self { p, diags }
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn bandwidth(&self) -> usize {
        self.diags.len() - 1
    }

    /// `Gamma[j+d][j]`, zero outside the band.
    #[inline]
    pub fn lower(&self, j: usize, d: usize) -> T {
        self.diags.get(d).map_or(T::zero(), |col| col[j])
    }

    pub fn dense(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.p, self.p);
        for (d, col) in self.diags.iter().enumerate() {
            for (j, &v) in col.iter().enumerate() {
                m[(j + d, j)] = v;
                m[(j, j + d)] = v.conj();
            }
        }
        for j in 0..self.p {
            m[(j, j)] = T::from_real(m[(j, j)].re());
        }
        m
    }

    /// `Re tr(Gamma S)` for Hermitian `S`, in `O(P w)`.
    pub fn trace_with(&self, s: &Matrix<T>) -> f64 {
        let mut acc = 0.0;
        for (j, &g) in self.diags[0].iter().enumerate() {
            acc += (g * s[(j, j)]).re();
        }
        for (d, col) in self.diags.iter().enumerate().skip(1) {
            for (j, &g) in col.iter().enumerate() {
                acc += 2.0 * (g * s[(j, j + d)]).re();
            }
        }
        acc
    }
}

/// Dense `Gamma(alpha)` in `O(P^2)`.
pub fn gs_assemble<T: Scalar>(alpha: &GsParams<T>) -> Matrix<T> {
    GsBand::new(alpha).dense()
}

/// Banded representation of `Gamma(alpha)`.
pub fn gs_band<T: Scalar>(alpha: &GsParams<T>) -> GsBand<T> {
    GsBand::new(alpha)
}

/// AR parameters `a_i = -alpha_i / alpha_0` (up to the last nonzero entry)
/// and innovation variance `1 / alpha_0`.
pub fn gs_to_ar<T: Scalar>(alpha: &GsParams<T>) -> (Vec<T>, f64) {
    let w = alpha.order();
    let inv = 1.0 / alpha.alpha0();
    let a = alpha.rest()[..w].iter().map(|&v| -v.scale(inv)).collect();
    (a, inv)
}

/// GS parameters of an AR(`w`) model, zero-padded to dimension `p`.
pub fn ar_to_gs<T: Scalar>(a: &[T], sigma2: f64, p: usize) -> Result<GsParams<T>> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "innovation variance must be positive, got {sigma2}"
        )));
    }
    if p == 0 || a.len() >= p {
        return Err(Error::DimensionMismatch {
            expected: p.saturating_sub(1),
            got: a.len(),
        });
    }
    let alpha0 = 1.0 / sigma2;
    let mut rest = vec![T::zero(); p - 1];
    for (r, &ai) in rest.iter_mut().zip(a) {
        *r = -ai.scale(alpha0);
    }
    GsParams::new(alpha0, rest)
}

/// Autocovariance of the Toeplitz matrix `Gamma(alpha)^{-1}`.
pub fn gs_to_autocov<T: Scalar>(alpha: &GsParams<T>) -> Result<HermitianToeplitz<T>> {
    Ok(gs_to_autocov_logdet(alpha)?.0)
}

/// [`gs_to_autocov`] together with `log det Gamma(alpha)^{-1}`.
pub fn gs_to_autocov_logdet<T: Scalar>(alpha: &GsParams<T>) -> Result<(HermitianToeplitz<T>, f64)> {
    let (a, sigma2) = gs_to_ar(alpha);
    ar_to_autocov_logdet(&a, sigma2, alpha.dim()).map_err(|e| match e {
        Error::Unstable { index, modulus } => Error::NotPositiveDefinite {
            index,
            value: 1.0 - modulus * modulus,
        },
        other => other,
    })
}

/// GS parameters of the inverse of a positive definite Toeplitz matrix,
/// from a full-order Levinson run.
pub fn gs_from_autocov<T: Scalar>(c: &HermitianToeplitz<T>) -> Result<GsParams<T>> {
    let lev = levinson(c.first_col(), false)?;
    let e = *lev.errors.last().expect("nonempty");
    ar_to_gs(&lev.predictor, e, c.dim())
}

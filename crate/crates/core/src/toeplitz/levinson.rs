//! Levinson-Durbin recursions.
//!
//! Convention: `C[i][j] = c(i-j)` and the order-`m` predictor `a` solves
//! `c(k) = sum_j a_j c(k-j)` for `k = 1..m`, with prediction-error variance
//! `E_m = c(0) - sum_j a_j conj c(j)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::HermitianToeplitz;

/// Reflection coefficients with modulus at or above this are treated as
/// unstable.
const STABILITY_MARGIN: f64 = 1e-12;

/// Output of the forward recursion.
#[derive(Debug, Clone)]
pub struct Levinson<T> {
    /// Predictor of the highest order reached.
    pub predictor: Vec<T>,
    /// Prediction-error variances `E_0, ..., E_{order}`.
    pub errors: Vec<f64>,
    /// Reflection coefficients `kappa_1, ..., kappa_{order}`.
    pub reflections: Vec<T>,
    /// Predictors of every order, kept only when requested.
    pub history: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> Levinson<T> {
    pub fn log_det(&self) -> f64 {
        self.errors.iter().map(|e| e.ln()).sum()
    }
}

#[inline]
fn update_predictor<T: Scalar>(a: &mut Vec<T>, kappa: T) {
    let m = a.len();
    let old = a.clone();
    for j in 0..m {
        a[j] = old[j] - kappa * old[m - 1 - j].conj();
    }
    a.push(kappa);
}

/// Forward recursion on the autocovariance `c`, up to order `P-1`.
///
/// Fails with [`Error::NotPositiveDefinite`] when a prediction-error variance
/// stops being positive.
pub fn levinson<T: Scalar>(c: &[T], keep_history: bool) -> Result<Levinson<T>> {
    let p = c.len();
    if p == 0 {
        return Err(Error::InvalidArgument("empty autocovariance".into()));
    }
    let e0 = c[0].re();
    if !(e0 > 0.0) || !e0.is_finite() {
        return Err(Error::NotPositiveDefinite {
            index: 0,
            value: e0,
        });
    }
    let mut a: Vec<T> = Vec::with_capacity(p);
    let mut errors = Vec::with_capacity(p);
    let mut reflections = Vec::with_capacity(p.saturating_sub(1));
    let mut history = keep_history.then(|| vec![Vec::new()]);
    errors.push(e0);
    let mut e = e0;
    for m in 0..p - 1 {
        let mut delta = c[m + 1];
        for (j, &aj) in a.iter().enumerate() {
            delta -= c[m - j] * aj;
        }
        let kappa = delta.scale(1.0 / e);
        let e_next = e * (1.0 - kappa.abs2());
        if !(e_next > 0.0) || !e_next.is_finite() {
            return Err(Error::NotPositiveDefinite {
                index: m + 1,
                value: e_next,
            });
        }
        update_predictor(&mut a, kappa);
        reflections.push(kappa);
        errors.push(e_next);
        e = e_next;
        if let Some(h) = history.as_mut() {
            h.push(a.clone());
        }
    }
    Ok(Levinson {
        predictor: a,
        errors,
        reflections,
        history,
    })
}

/// Step-down recursion: recovers the reflection coefficients of an AR
/// predictor together with the error variances `E_0..E_w` implied by the
/// innovation variance `E_w = sigma2`.
pub fn step_down<T: Scalar>(a: &[T], sigma2: f64) -> Result<(Vec<T>, Vec<f64>)> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "innovation variance must be positive, got {sigma2}"
        )));
    }
    let w = a.len();
    let mut cur = a.to_vec();
    let mut kappas = vec![T::zero(); w];
    let mut errors = vec![0.0; w + 1];
    errors[w] = sigma2;
    for m in (0..w).rev() {
        let kappa = cur[m];
        let mod2 = kappa.abs2();
        if mod2.sqrt() >= 1.0 - STABILITY_MARGIN {
            return Err(Error::Unstable {
                index: m + 1,
                modulus: mod2.sqrt(),
            });
        }
        kappas[m] = kappa;
        let denom = 1.0 - mod2;
        let next: Vec<T> = (0..m)
            .map(|j| (cur[j] + kappa * cur[m - 1 - j].conj()).scale(1.0 / denom))
            .collect();
        errors[m] = errors[m + 1] / denom;
        cur = next;
    }
    Ok((kappas, errors))
}

/// Autocovariance `c(0..P-1)` of the AR process
/// `x_t = sum_j a_j x_{t-j} + e_t`, `Var e_t = sigma2`.
///
/// Runs the step-down recursion to reflection coefficients and then the
/// forward recursion to autocovariances; past order `w` the Yule-Walker
/// extension costs `O(w)` per lag, so the total is `O(w^2 + P w)`.
pub fn ar_to_autocov<T: Scalar>(a: &[T], sigma2: f64, p: usize) -> Result<HermitianToeplitz<T>> {
    Ok(ar_to_autocov_logdet(a, sigma2, p)?.0)
}

/// [`ar_to_autocov`] together with `log det C`, read off the step-down
/// error variances (`E_k = sigma2` for `k >= w`).
pub fn ar_to_autocov_logdet<T: Scalar>(
    a: &[T],
    sigma2: f64,
    p: usize,
) -> Result<(HermitianToeplitz<T>, f64)> {
    let w = a.len();
    if p == 0 || w >= p {
        return Err(Error::DimensionMismatch {
            expected: p.saturating_sub(1),
            got: w,
        });
    }
    let (kappas, errors) = step_down(a, sigma2)?;
    let mut c = Vec::with_capacity(p);
    c.push(T::from_real(errors[0]));
    let mut pred: Vec<T> = Vec::with_capacity(w);
    for m in 0..w {
        let mut acc = kappas[m].scale(errors[m]);
        for (j, &aj) in pred.iter().enumerate() {
            acc += c[m - j] * aj;
        }
        c.push(acc);
        update_predictor(&mut pred, kappas[m]);
    }
    for m in w..p - 1 {
        let mut acc = T::zero();
        for (j, &aj) in a.iter().enumerate() {
            acc += c[m - j] * aj;
        }
        c.push(acc);
    }
    let logdet = errors.iter().map(|e| e.ln()).sum::<f64>() + (p - 1 - w) as f64 * sigma2.ln();
    Ok((HermitianToeplitz::new(c)?, logdet))
}

/// `log det C` as the sum of log prediction-error variances.
pub fn toeplitz_logdet<T: Scalar>(c: &HermitianToeplitz<T>) -> Result<f64> {
    Ok(levinson(c.first_col(), false)?.log_det())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn ar1_autocov() {
        let c = ar_to_autocov(&[0.5], 0.75, 3).unwrap();
        let expect = [1.0, 0.5, 0.25];
        for (a, b) in c.first_col().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn white_noise_autocov() {
        let c = ar_to_autocov::<f64>(&[], 2.0, 4).unwrap();
        assert_eq!(c.first_col(), &[2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn unstable_rejected() {
        assert!(matches!(
            ar_to_autocov(&[1.0], 1.0, 3),
            Err(Error::Unstable { index: 1, .. })
        ));
        assert!(matches!(
            ar_to_autocov(&[0.5, 0.6], 1.0, 4),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn round_trip_through_levinson() {
        let a = [0.4, -0.2, 0.1];
        let c = ar_to_autocov(&a, 1.3, 10).unwrap();
        let lev = levinson(c.first_col(), false).unwrap();
        for (j, &v) in lev.predictor.iter().enumerate() {
            let expect = a.get(j).copied().unwrap_or(0.0);
            assert!((v - expect).abs() < 1e-12, "a[{j}] = {v}");
        }
        assert!((lev.errors[9] - 1.3).abs() < 1e-12);
    }

    #[test]
    fn complex_round_trip() {
        let a = [C::new(0.3, 0.2), C::new(-0.1, 0.15)];
        let c = ar_to_autocov(&a, 0.8, 6).unwrap();
        let lev = levinson(c.first_col(), false).unwrap();
        for (j, v) in lev.predictor.iter().enumerate() {
            let expect = a.get(j).copied().unwrap_or(C::new(0.0, 0.0));
            assert!((v - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn logdet_of_scaled_identity() {
        let c = HermitianToeplitz::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(toeplitz_logdet(&c).unwrap(), 0.0);
        let c = HermitianToeplitz::new(vec![2.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((toeplitz_logdet(&c).unwrap() - 4.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn logdet_rejects_indefinite() {
        let c = HermitianToeplitz::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            toeplitz_logdet(&c),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
    }
}

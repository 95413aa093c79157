use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::toeplitz::HermitianToeplitz;

pub(crate) fn check_samples<T: Scalar>(samples: &[Vec<T>]) -> Result<usize> {
    let Some(first) = samples.first() else {
        return Err(Error::InvalidArgument(
            "at least one sample is required".into(),
        ));
    };
    let p = first.len();
    if p == 0 {
        return Err(Error::InvalidArgument(
            "samples must have positive dimension".into(),
        ));
    }
    if let Some(x) = samples.iter().find(|x| x.len() != p) {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: x.len(),
        });
    }
    Ok(p)
}

/// Sample covariance `S = (1/N) sum_n x_n x_n^H`.
pub fn sample_cov<T: Scalar>(samples: &[Vec<T>]) -> Result<Matrix<T>> {
    let p = check_samples(samples)?;
    let mut s = Matrix::<T>::zeros(p, p);
    for x in samples {
        for i in 0..p {
            let xi = x[i];
            for j in 0..=i {
                s[(i, j)] += xi * x[j].conj();
            }
        }
    }
    let inv = 1.0 / samples.len() as f64;
    for i in 0..p {
        for j in 0..=i {
            let v = s[(i, j)].scale(inv);
            s[(i, j)] = v;
            s[(j, i)] = v.conj();
        }
        s[(i, i)] = T::from_real(s[(i, i)].re());
    }
    Ok(s)
}

/// Diagonal averages `c(q) = mean_b S[b+q][b]`. Not necessarily positive
/// semidefinite.
pub fn s_avg<T: Scalar>(s: &Matrix<T>) -> HermitianToeplitz<T> {
    let p = s.nrows();
    let c = (0..p)
        .map(|q| {
            let sum: T = (0..p - q).map(|b| s[(b + q, b)]).sum();
            sum.scale(1.0 / (p - q) as f64)
        })
        .collect();
    HermitianToeplitz::new(c).expect("nonempty diagonal")
}

/// Diagonal averages of the sample covariance for lags `0..=max_lag`,
/// computed from the samples in `O(N P max_lag)` without forming `S`.
pub fn lag_averages<T: Scalar>(samples: &[Vec<T>], max_lag: usize) -> Result<Vec<T>> {
    let p = check_samples(samples)?;
    let k = max_lag.min(p - 1);
    let mut c = vec![T::zero(); k + 1];
    for x in samples {
        for (q, cq) in c.iter_mut().enumerate() {
            let mut acc = T::zero();
            for b in 0..p - q {
                acc += x[b + q] * x[b].conj();
            }
            *cq += acc;
        }
    }
    let n = samples.len() as f64;
    for (q, cq) in c.iter_mut().enumerate() {
        *cq = cq.scale(1.0 / (n * (p - q) as f64));
    }
    c[0] = T::from_real(c[0].re());
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample() {
        let s = sample_cov(&[vec![1.0, 2.0]]).unwrap();
        assert_eq!(s.as_slice(), &[1.0, 2.0, 2.0, 4.0]);
    }

    #[test]
    fn diagonal_average() {
        let s = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 5.0]]).unwrap();
        assert_eq!(s_avg(&s).first_col(), &[3.0, 2.0]);
        let t = HermitianToeplitz::new(vec![2.0, 0.5, -0.1]).unwrap();
        assert_eq!(s_avg(&t.dense()).first_col(), t.first_col());
    }

    #[test]
    fn lag_averages_match_savg() {
        let xs = vec![vec![1.0, -2.0, 0.5, 3.0], vec![0.3, 0.2, -1.0, 2.0]];
        let full = s_avg(&sample_cov(&xs).unwrap());
        let fast = lag_averages(&xs, 2).unwrap();
        for q in 0..3 {
            assert!((fast[q] - full.first_col()[q]).abs() < 1e-14);
        }
    }

    #[test]
    fn ragged_rejected() {
        assert!(sample_cov(&[vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(sample_cov::<f64>(&[]).is_err());
    }
}

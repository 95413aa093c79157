use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::LowerTriToeplitz;

/// Generalized Fibonacci sequence `F_0 = 1`, `F_i = sum_{l<i} r_{i-l} F_l`.
///
/// `r[0]` holds `r_1`. Weights past the end of `r` are treated as zero, so
/// trailing zeros never cost anything: the work is `O(up_to * w)` where `w`
/// is the index of the last nonzero weight.
pub fn fib_seq<T: Scalar>(r: &[T], up_to: usize) -> Vec<T> {
    let w = r.iter().rposition(|v| !v.is_zero()).map_or(0, |i| i + 1);
    let mut f = Vec::with_capacity(up_to + 1);
    f.push(T::one());
    for i in 1..=up_to {
        let lo = i.saturating_sub(w);
        let mut acc = T::zero();
        for l in lo..i {
            acc += r[i - l - 1] * f[l];
        }
        f.push(acc);
    }
    f
}

/// Inverse of a lower-triangular Toeplitz matrix.
///
/// Writing `D = d_0 (I - sum_k r_k E^k)`, the inverse has first column
/// `(F_0(r), ..., F_{P-1}(r)) / d_0`.
pub fn tri_toeplitz_inverse<T: Scalar>(d: &LowerTriToeplitz<T>) -> Result<LowerTriToeplitz<T>> {
    let col = d.first_col();
    let Some(&d0) = col.first() else {
        return Ok(LowerTriToeplitz::new(Vec::new()));
    };
    if d0.abs() == 0.0 {
        return Err(Error::Singular(
            "lower-triangular Toeplitz with zero diagonal",
        ));
    }
    let inv_d0 = T::one() / d0;
    let r: Vec<T> = col[1..].iter().map(|&v| -(v * inv_d0)).collect();
    let f = fib_seq(&r, col.len() - 1);
    Ok(LowerTriToeplitz::new(
        f.into_iter().map(|v| v * inv_d0).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_one() {
        assert_eq!(fib_seq(&[3.0, -2.0], 0), vec![1.0]);
    }

    #[test]
    fn zero_weights() {
        assert_eq!(fib_seq(&[0.0; 5], 5), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn classic_fibonacci() {
        let mut r = vec![0.0; 9];
        r[0] = 1.0;
        r[1] = 1.0;
        assert_eq!(
            fib_seq(&r, 9),
            vec![1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0]
        );
    }

    #[test]
    fn two_by_two_inverse() {
        let inv = tri_toeplitz_inverse(&LowerTriToeplitz::new(vec![1.0, -0.3])).unwrap();
        assert_eq!(inv.first_col(), &[1.0, 0.3]);
    }

    #[test]
    fn identity_inverse() {
        let inv = tri_toeplitz_inverse(&LowerTriToeplitz::new(vec![1.0, 0.0, 0.0])).unwrap();
        assert_eq!(inv.first_col(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_diagonal_is_singular() {
        let d = LowerTriToeplitz::new(vec![0.0, 1.0]);
        assert!(matches!(tri_toeplitz_inverse(&d), Err(Error::Singular(_))));
    }

    #[test]
    fn scaled_diagonal() {
        let d = LowerTriToeplitz::new(vec![2.0, 1.0, -0.5, 0.25]);
        let inv = tri_toeplitz_inverse(&d).unwrap();
        let prod = d.mul(&inv);
        assert!((prod.first_col()[0] - 1.0).abs() < 1e-15);
        for v in &prod.first_col()[1..] {
            assert!(v.abs() < 1e-15);
        }
    }
}

use crate::dense::Matrix;
use crate::scalar::Scalar;

/// Suffix sums along every diagonal of a square matrix:
/// `T[k][m] = sum_{j >= 0} Q[k+j][m+j]`.
///
/// Stored with one row and column of zero padding so that `get(P, m)` and
/// `get(k, P)` are valid.
#[derive(Debug, Clone)]
pub struct PartialDiagSums<T> {
    p: usize,
    table: Vec<T>,
}

impl<T: Scalar> PartialDiagSums<T> {
    pub fn new(q: &Matrix<T>) -> Self {
        assert!(q.is_square());
        let p = q.nrows();
        let stride = p + 1;
        let mut table = vec![T::zero(); stride * stride];
        for k in (0..p).rev() {
            for m in (0..p).rev() {
                table[k * stride + m] = q[(k, m)] + table[(k + 1) * stride + m + 1];
            }
        }
        Self { p, table }
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    /// `T[k][m]`; zero when either index is `>= P`.
    #[inline]
    pub fn get(&self, k: usize, m: usize) -> T {
        if k > self.p || m > self.p {
            return T::zero();
        }
        self.table[k * (self.p + 1) + m]
    }
}

/// `tr(C D (E^k)^T)` for a Hermitian Toeplitz `C` with first column `c` and a
/// lower-triangular Toeplitz `D` with first column `d`:
/// `sum_m min(P-k, P-m) d_m c(k-m)`.
///
/// Zero entries of `d` are skipped, so banded or trailing-supported factors
/// cost only their support.
pub fn trace_toep_tri_shift<T: Scalar>(c: &[T], d: &[T], k: usize) -> T {
    let p = c.len();
    debug_assert_eq!(p, d.len());
    debug_assert!(k < p);
    let mut acc = T::zero();
    for (m, &dm) in d.iter().enumerate() {
        if dm.is_zero() {
            continue;
        }
        let lag = if k >= m { c[k - m] } else { c[m - k].conj() };
        acc += dm * lag.scale((p - k.max(m)) as f64);
    }
    acc
}

/// `tr(Q D (E^k)^T) = sum_m d_m T[k][m]` from precomputed diagonal sums.
pub fn trace_general_tri_shift<T: Scalar>(q_sums: &PartialDiagSums<T>, d: &[T], k: usize) -> T {
    let mut acc = T::zero();
    for (m, &dm) in d.iter().enumerate() {
        if dm.is_zero() {
            continue;
        }
        acc += dm * q_sums.get(k, m);
    }
    acc
}

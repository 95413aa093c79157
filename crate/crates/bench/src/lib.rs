//! Shared fixtures for the criterion benchmarks.

use toepcov_core::processes::{sample, sample_raw, ProcessSpec};
use toepcov_core::{GsParams, LikelihoodContext};

/// Dimensions swept by every benchmark group.
pub const DIMS: [usize; 4] = [32, 64, 128, 256];

pub fn ar1(p: usize) -> ProcessSpec {
    ProcessSpec::ar1(0.5, 0.64, p).expect("stable AR(1)")
}

/// `n` raw AR(1) samples of dimension `p`.
pub fn ar1_samples(p: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    sample_raw(&ar1(p), n, seed).expect("sampling a valid process")
}

/// Likelihood context of `n` AR(1) samples.
pub fn ar1_context(p: usize, n: usize, seed: u64) -> LikelihoodContext<f64> {
    sample(&ar1(p), n, seed)
        .expect("sampling a valid process")
        .ctx
}

/// Order-`w` GS parameters of a stable AR(w) predictor with geometrically
/// decaying coefficients.
pub fn gs_point(p: usize, w: usize) -> GsParams<f64> {
    let a: Vec<f64> = (1..=w).map(|i| 0.5f64.powi(i as i32) / w as f64).collect();
    toepcov_core::gs::ar_to_gs(&a, 1.0, p).expect("stable predictor")
}

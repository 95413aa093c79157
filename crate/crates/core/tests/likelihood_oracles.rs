mod common;

use common::{random_pd_alpha, random_pd_alpha_k, random_psd, rng, to_na, RandScalar};
use num_complex::Complex64;
use rand::Rng;
use toepcov_core::gs::{gs_assemble, GsParams};
use toepcov_core::likelihood::LikelihoodContext;
use toepcov_core::scalar::Scalar;

fn dense_loglik<T: Scalar>(alpha: &GsParams<T>, s: &toepcov_core::dense::Matrix<T>) -> f64 {
    let g = to_na(&gs_assemble(alpha));
    let chol = g.clone().cholesky().expect("PD");
    let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.re.ln()).sum::<f64>();
    logdet - (g * to_na(s)).trace().re
}

fn perturbed<T: Scalar>(alpha: &GsParams<T>, i: usize, delta: T) -> GsParams<T> {
    let mut v = alpha.to_vec();
    v[i] += delta;
    GsParams::from_vec(&v).unwrap()
}

/// Worst componentwise relative error of the analytic gradient against
/// central differences with step 1e-6.
fn fd_check<T: RandScalar>(seed: u64, p: usize) -> f64 {
    let mut r = rng(seed);
    let w = r.random_range(1..p);
    let alpha = random_pd_alpha_k::<T>(&mut r, p, w, 0.6);
    let s = random_psd::<T>(&mut r, p, 2 * p);
    let ctx = LikelihoodContext::new(s, 2 * p).unwrap();
    let support: Vec<usize> = (0..p).collect();
    let g = ctx.grad(&alpha, &support).unwrap();
    let h = 1e-6;
    let l = |a: &GsParams<T>| ctx.loglik(a).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..p {
        let dre = (l(&perturbed(&alpha, i, T::from_real(h)))
            - l(&perturbed(&alpha, i, T::from_real(-h))))
            / (2.0 * h);
        let fd = if T::IS_COMPLEX && i > 0 {
            let dim = (l(&perturbed(&alpha, i, T::from_parts(0.0, h)))
                - l(&perturbed(&alpha, i, T::from_parts(0.0, -h))))
                / (2.0 * h);
            T::from_parts(dre, dim)
        } else {
            T::from_real(dre)
        };
        let err = (g[i] - fd).abs() / fd.abs().max(1.0);
        worst = worst.max(err);
    }
    worst
}

#[test]
fn loglik_matches_dense_real() {
    let mut r = rng(11);
    for _ in 0..50 {
        let p = r.random_range(2..24);
        let w = r.random_range(0..p);
        let alpha = random_pd_alpha::<f64>(&mut r, p, w);
        let s = random_psd::<f64>(&mut r, p, 3);
        let ctx = LikelihoodContext::new(s.clone(), 3).unwrap();
        let fast = ctx.loglik(&alpha).unwrap();
        let slow = dense_loglik(&alpha, &s);
        assert!(
            (fast - slow).abs() < 1e-9 * (1.0 + slow.abs()),
            "{fast} vs {slow}"
        );
    }
}

#[test]
fn loglik_matches_dense_complex() {
    let mut r = rng(12);
    for _ in 0..30 {
        let p = r.random_range(2..20);
        let w = r.random_range(0..p);
        let alpha = random_pd_alpha::<Complex64>(&mut r, p, w);
        let s = random_psd::<Complex64>(&mut r, p, 4);
        let ctx = LikelihoodContext::new(s.clone(), 4).unwrap();
        let fast = ctx.loglik(&alpha).unwrap();
        let slow = dense_loglik(&alpha, &s);
        assert!(
            (fast - slow).abs() < 1e-9 * (1.0 + slow.abs()),
            "{fast} vs {slow}"
        );
    }
}

#[test]
fn loglik_is_deterministic() {
    let mut r = rng(13);
    let alpha = random_pd_alpha::<f64>(&mut r, 16, 4);
    let ctx = LikelihoodContext::new(random_psd::<f64>(&mut r, 16, 5), 5).unwrap();
    assert_eq!(
        ctx.loglik(&alpha).unwrap().to_bits(),
        ctx.loglik(&alpha).unwrap().to_bits()
    );
}

#[test]
fn gradient_matches_finite_differences_real() {
    for (k, p) in [8usize, 16, 32].into_iter().enumerate() {
        let worst = (0..34)
            .map(|t| fd_check::<f64>(1000 * k as u64 + t, p))
            .fold(0.0, f64::max);
        assert!(worst < 1e-5, "P = {p}: {worst:e}");
    }
}

#[test]
fn gradient_matches_finite_differences_complex() {
    for (k, p) in [8usize, 16, 32].into_iter().enumerate() {
        let worst = (0..10)
            .map(|t| fd_check::<Complex64>(5000 + 1000 * k as u64 + t, p))
            .fold(0.0, f64::max);
        assert!(worst < 1e-5, "P = {p}: {worst:e}");
    }
}

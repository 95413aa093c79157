mod common;

use common::{rng, to_na_real};
use proptest::prelude::*;
use rand::Rng;
use toepcov_core::constraints::{
    b_of_k, bisect_eta, eig_constraints, frob_value, g_vector, project_box, spectral_pd_check,
    BoxFamily, BoxSpec,
};
use toepcov_core::dense::Matrix;
use toepcov_core::gs::{build_b, build_z, gs_assemble, GsParams};

fn random_in_box(r: &mut impl Rng, spec: &BoxSpec) -> GsParams<f64> {
    let a0 = r.random_range(0.1..10.0);
    let rest = spec
        .k()
        .iter()
        .map(|k| r.random_range(-1.0..=1.0) * k * a0)
        .collect();
    GsParams::new(a0, rest).unwrap()
}

fn dense_frob(alpha: &GsParams<f64>) -> f64 {
    let b = to_na_real(&build_b(alpha).dense());
    let z = to_na_real(&build_z(alpha).dense());
    let binv_h = b.try_inverse().unwrap().transpose();
    (z.transpose() * binv_h).norm_squared()
}

#[test]
fn containment_chain() {
    let p = 16;
    let specs = BoxSpec::registry(p, 1e-3).unwrap();
    let mut r = rng(11);
    for spec in &specs {
        for _ in 0..2000 {
            let alpha = random_in_box(&mut r, spec);
            assert!(spec.contains(&alpha));
            let f = frob_value(&alpha);
            assert!(f < 1.0, "{}: frob {f}", spec.family_id());
            let eig = eig_constraints(&alpha, 0.0).unwrap();
            assert!(eig.iter().all(|&l| l > 0.0));
            assert!(spectral_pd_check(&alpha));
        }
    }
}

#[test]
fn frob_below_one_implies_pd() {
    let mut r = rng(12);
    let mut hits = 0;
    for _ in 0..4000 {
        let p = r.random_range(2..12);
        let a0 = 1.0;
        let rest = (1..p).map(|_| r.random_range(-0.6..0.6)).collect();
        let alpha = GsParams::new(a0, rest).unwrap();
        if frob_value(&alpha) < 1.0 {
            hits += 1;
            assert!(spectral_pd_check(&alpha));
        }
    }
    assert!(hits > 100);
}

#[test]
fn eta_is_dimension_stable() {
    for fam in BoxFamily::registry() {
        let (e32, _) = bisect_eta(&fam, 32, 1e-3).unwrap();
        let (e256, _) = bisect_eta(&fam, 256, 1e-3).unwrap();
        assert!((e32 - e256).abs() < 0.01, "{}: {e32} vs {e256}", fam.id());
    }
}

#[test]
fn spectral_check_agrees_with_dense_eigenvalues() {
    let mut r = rng(13);
    for _ in 0..300 {
        let p = r.random_range(2..10);
        let rest = (1..p).map(|_| r.random_range(-1.0..1.0)).collect();
        let alpha = GsParams::new(1.0, rest).unwrap();
        let eig = to_na_real(&gs_assemble(&alpha)).symmetric_eigenvalues();
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min.abs() > 1e-8 {
            assert_eq!(spectral_pd_check(&alpha), min > 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frob_closed_form(seed in any::<u64>(), p in 2usize..40) {
        let mut r = rng(seed);
        let a0 = r.random_range(0.5..2.0);
        let rest = (1..p).map(|i| r.random_range(-0.5..0.5) * a0 / i as f64).collect();
        let alpha = GsParams::new(a0, rest).unwrap();
        let dense = dense_frob(&alpha);
        prop_assert!((frob_value(&alpha) - dense).abs() < 1e-10 * (1.0 + dense));
        prop_assert_eq!(g_vector(&alpha).len(), p - 1);
    }

    #[test]
    fn b_monotone(seed in any::<u64>(), p in 2usize..40) {
        let mut r = rng(seed);
        let k: Vec<f64> = (1..p).map(|_| r.random_range(0.0..0.5)).collect();
        let k2: Vec<f64> = k.iter().map(|v| v + r.random_range(0.0..0.2)).collect();
        prop_assert!(b_of_k(&k) <= b_of_k(&k2));
    }

    #[test]
    fn projection_lands_in_certified_box(seed in any::<u64>(), fam in 0usize..5, p in 2usize..40) {
        let mut r = rng(seed);
        let spec = BoxSpec::from_family(&BoxFamily::registry()[fam], p, 1e-3).unwrap();
        let a0 = r.random_range(-1.0..5.0f64).max(1e-9);
        let rest = (1..p).map(|_| r.random_range(-10.0..10.0)).collect();
        let raw = GsParams::new(a0, rest).unwrap();
        let proj = project_box(&raw, &spec);
        prop_assert!(spec.contains(&proj));
        prop_assert!(spectral_pd_check(&proj));
        prop_assert_eq!(project_box(&proj, &spec), proj);
    }
}

#[test]
fn dense_oracle_sanity() {
    let alpha = GsParams::new(1.0, vec![0.5]).unwrap();
    // B = [[1,0],[.5,1]], Z = [[0,0],[.5,0]]; Z^T B^{-T} has one entry 0.5.
    assert!((dense_frob(&alpha) - 0.25).abs() < 1e-15);
    assert!((frob_value(&alpha) - 0.25).abs() < 1e-15);
    let _ = Matrix::<f64>::identity(1);
}

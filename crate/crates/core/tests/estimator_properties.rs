mod common;

use common::rng;
use rand::Rng;
use toepcov_core::constraints::{spectral_pd_check, BoxFamily, BoxSpec, ToleranceSet};
use toepcov_core::estimators::{
    estimate_eig, estimate_frob, estimate_pgd, estimate_pls, pls_unconstrained, tune_box_family,
    tune_order, BarrierOptions, BoxMethod, OrderPolicy, PgdOptions, Pls,
};
use toepcov_core::likelihood::LikelihoodContext;
use toepcov_core::processes::{sample, ProcessSpec};

fn box_spec(p: usize) -> BoxSpec {
    BoxSpec::from_family(&BoxFamily::Exponential { lambda: 1.4 }, p, 1e-3).unwrap()
}

fn ar1_ctx(a: f64, p: usize, n: usize, seed: u64) -> LikelihoodContext<f64> {
    sample(&ProcessSpec::ar1(a, 0.64, p).unwrap(), n, seed)
        .unwrap()
        .ctx
}

#[test]
fn every_estimate_is_pd_and_banded() {
    let p = 12;
    let tol = ToleranceSet::default();
    for seed in 0..6 {
        let ctx = ar1_ctx(0.7, p, 8, seed);
        for w in [0, 1, 3] {
            let reports = [
                estimate_pgd(&ctx, &box_spec(p), w, &PgdOptions::default()).unwrap(),
                estimate_pls(&ctx, &box_spec(p), w).unwrap(),
                estimate_frob(&ctx, &tol, w, &BarrierOptions::default()).unwrap(),
                estimate_eig(&ctx, &tol, w, &BarrierOptions::default()).unwrap(),
            ];
            for r in &reports {
                assert!(spectral_pd_check(&r.alpha));
                let icm = r.icm();
                for i in 0..p {
                    for j in 0..p {
                        if i.abs_diff(j) > w {
                            assert_eq!(icm[(i, j)], 0.0, "entry ({i},{j}) at order {w}");
                        }
                    }
                }
                let again = ctx.loglik(&r.alpha).unwrap();
                assert!((again - r.loglik).abs() <= 1e-12 * (1.0 + again.abs()));
            }
        }
    }
}

#[test]
fn pgd_iterates_feasible_and_monotone() {
    let p = 16;
    let spec = box_spec(p);
    let opts = PgdOptions {
        record_iterates: true,
        ..PgdOptions::default()
    };
    for seed in 0..10 {
        let ctx = ar1_ctx(0.5, p, 8, 100 + seed);
        let r = estimate_pgd(&ctx, &spec, 3, &opts).unwrap();
        assert!(r.history.windows(2).all(|h| h[1] >= h[0]));
        for it in r.iterates.as_ref().unwrap() {
            assert!(spec.contains(it));
            assert!(it.alpha0() >= spec.eps0());
        }
        if r.converged {
            let scale = ctx.trace_scale();
            let l_norm = r.loglik + p as f64 * scale.ln();
            assert!(r.stationarity < 1e-5 * (1.0 + l_norm.abs()));
        }
    }
}

/// Conditional log-likelihood of the last `P - w` entries given the first
/// `w`, per sample and up to constants.
fn conditional_loglik(st: &toepcov_core::dense::Matrix<f64>, a: &[f64], s2: f64, p: usize) -> f64 {
    let w = a.len();
    let mut q = st[(0, 0)];
    for i in 0..w {
        q -= 2.0 * a[i] * st[(i + 1, 0)];
        for j in 0..w {
            q += a[i] * a[j] * st[(i + 1, j + 1)];
        }
    }
    -((p - w) as f64) * s2.ln() - q / s2
}

#[test]
fn pls_maximizes_conditional_likelihood() {
    let p = 16;
    let ctx = ar1_ctx(0.5, p, 8, 7);
    let w = 2;
    let fit = pls_unconstrained(&ctx, w).unwrap();
    let best = conditional_loglik(&fit.s_tilde, &fit.a, fit.sigma2, p);
    let mut r = rng(8);
    for _ in 0..10_000 {
        let scale = 10f64.powf(r.random_range(-4.0..0.0));
        let a: Vec<f64> = fit
            .a
            .iter()
            .map(|v| v + scale * r.random_range(-1.0..1.0))
            .collect();
        let s2 = fit.sigma2 * (1.0 + scale * r.random_range(-0.9..1.0));
        assert!(conditional_loglik(&fit.s_tilde, &a, s2, p) <= best + 1e-12 * best.abs());
    }
}

#[test]
fn bic_recovers_order() {
    let p = 16;
    let spec = box_spec(p);
    let est = Pls { spec };
    let trials = 40;
    let mut ar_hits = 0;
    let mut white_hits = 0;
    for seed in 0..trials {
        let ar = ar1_ctx(0.5, p, 256, 1000 + seed);
        if tune_order(&est, &ar, None).unwrap().order == 1 {
            ar_hits += 1;
        }
        let white = sample(&ProcessSpec::white(1.0, p).unwrap(), 256, 2000 + seed)
            .unwrap()
            .ctx;
        if tune_order(&est, &white, None).unwrap().order == 0 {
            white_hits += 1;
        }
    }
    assert!(
        ar_hits as f64 >= 0.9 * trials as f64,
        "AR(1) hits {ar_hits}"
    );
    assert!(
        white_hits as f64 >= 0.9 * trials as f64,
        "white hits {white_hits}"
    );
}

#[test]
fn order_tuning_needs_two_samples() {
    let ctx = ar1_ctx(0.5, 8, 1, 3);
    assert!(tune_order(&Pls { spec: box_spec(8) }, &ctx, None).is_err());
}

#[test]
fn family_selection_is_argmax() {
    let p = 16;
    let specs = BoxSpec::registry(p, 1e-3).unwrap();
    let ctx = ar1_ctx(0.5, p, 16, 5);
    let best = tune_box_family(&BoxMethod::Pls, &ctx, &specs, OrderPolicy::Fixed(3)).unwrap();
    let max = specs
        .iter()
        .map(|s| estimate_pls(&ctx, s, 3).unwrap().loglik)
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(best.loglik, max);
    let single =
        tune_box_family(&BoxMethod::Pls, &ctx, &specs[2..3], OrderPolicy::Fixed(3)).unwrap();
    assert_eq!(
        single.alpha,
        estimate_pls(&ctx, &specs[2], 3).unwrap().alpha
    );
}

#[test]
fn strong_correlation_selects_wide_first_bound() {
    // |alpha_1 / alpha_0| = 0.9 only fits under the family with the largest
    // first bound K_1, which is the fastest decaying one.
    let p = 16;
    let specs = BoxSpec::registry(p, 1e-3).unwrap();
    let widest = specs
        .iter()
        .max_by(|a, b| a.k()[0].total_cmp(&b.k()[0]))
        .unwrap()
        .family_id()
        .to_string();
    let mut hits = 0;
    for seed in 0..20 {
        let ctx = ar1_ctx(0.9, p, 64, 300 + seed);
        let r = tune_box_family(&BoxMethod::Pls, &ctx, &specs, OrderPolicy::Fixed(1)).unwrap();
        if r.family_id.as_deref() == Some(widest.as_str()) {
            hits += 1;
        }
    }
    assert!(hits > 10, "hits {hits}");
}

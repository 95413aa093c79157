use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use toepcov_bench::{ar1_context, ar1_samples, DIMS};
use toepcov_core::baselines::{em_toeplitz, masked_savg, MaskKind, MaskSpec};
use toepcov_core::constraints::{BoxFamily, BoxSpec};
use toepcov_core::estimators::{estimate_pgd, estimate_pls_samples, PgdOptions};

const ORDER: usize = 6;
const N: usize = 16;

fn spec(p: usize) -> BoxSpec {
    BoxSpec::from_family(&BoxFamily::registry()[0], p, 1e-3).unwrap()
}

fn pgd(c: &mut Criterion) {
    let mut g = c.benchmark_group("pgd");
    g.sample_size(20);
    for p in DIMS {
        let ctx = ar1_context(p, N, 3);
        let s = spec(p);
        let opts = PgdOptions::default();
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| estimate_pgd(black_box(&ctx), &s, ORDER, &opts).unwrap())
        });
    }
    g.finish();
}

fn pls(c: &mut Criterion) {
    let mut g = c.benchmark_group("pls");
    for p in DIMS {
        let xs = ar1_samples(p, N, 4);
        let s = spec(p);
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| estimate_pls_samples(black_box(&xs), &s, ORDER).unwrap())
        });
    }
    g.finish();
}

fn banding(c: &mut Criterion) {
    let mut g = c.benchmark_group("banding");
    for p in DIMS {
        let xs = ar1_samples(p, N, 5);
        let mask = MaskSpec::new(MaskKind::Banding, ORDER);
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| masked_savg(black_box(&xs), mask).unwrap())
        });
    }
    g.finish();
}

fn em(c: &mut Criterion) {
    let mut g = c.benchmark_group("em");
    g.sample_size(10);
    for p in [32usize, 64, 128] {
        let ctx = ar1_context(p, N, 6);
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| em_toeplitz(black_box(ctx.scm()), 2 * p, 100, 1e-6).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, pgd, pls, banding, em);
criterion_main!(benches);

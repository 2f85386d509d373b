//! Races the parallel trial dispatch against the always-available sequential
//! path on the heavy campaign kernels. With `--no-default-features` the
//! "par" variants degrade to sequential, so the comparison is a no-op there.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eja_core::jordan::JordanAlgebra;
use eja_core::metric::{midpoint_trial, PairKind};
use eja_core::par;
use std::hint::black_box;

const SEED: u64 = 0xE1A;

fn jordan_identity_kernel(alg: &JordanAlgebra, trial: u64) -> f64 {
    let mut rng = par::rng_for_trial(SEED, trial);
    let a = alg.random_element(&mut rng);
    let b = alg.random_element(&mut rng);
    let aa = alg.square(&a).unwrap();
    let lhs = alg.product(&a, &alg.product(&aa, &b).unwrap()).unwrap();
    let rhs = alg.product(&aa, &alg.product(&a, &b).unwrap()).unwrap();
    alg.norm(&alg.sub(&lhs, &rhs))
}

fn bench_jordan_identity(c: &mut Criterion) {
    let alg = JordanAlgebra::parse("H(3,O)").unwrap();
    let trials = 256u64;
    let mut group = c.benchmark_group("jordan_identity_h3o");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("seq", trials), &trials, |b, &n| {
        b.iter(|| black_box(par::map_trials_seq(n, |i| jordan_identity_kernel(&alg, i))))
    });
    group.bench_with_input(BenchmarkId::new("par", trials), &trials, |b, &n| {
        b.iter(|| black_box(par::map_trials(n, |i| jordan_identity_kernel(&alg, i))))
    });
    group.finish();
}

fn bench_midpoints(c: &mut Criterion) {
    let alg = JordanAlgebra::parse("H(3,C)").unwrap();
    let trials = 64u64;
    let kernel = |i: u64| {
        let mut rng = par::rng_for_trial(SEED, i);
        midpoint_trial(&alg, &mut rng, i, PairKind::Random).unwrap()
    };
    let mut group = c.benchmark_group("midpoints_h3c");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("seq", trials), &trials, |b, &n| {
        b.iter(|| black_box(par::map_trials_seq(n, kernel)))
    });
    group.bench_with_input(BenchmarkId::new("par", trials), &trials, |b, &n| {
        b.iter(|| black_box(par::map_trials(n, kernel)))
    });
    group.finish();
}

fn bench_plane_points(c: &mut Criterion) {
    let trials = 256u64;
    let kernel = |i: u64| {
        let mut rng = par::rng_for_trial(SEED, i);
        let p = eja_core::bioct::random_point(&mut rng).unwrap();
        eja_core::bioct::point_residuals(p.rep())
    };
    let mut group = c.benchmark_group("bioct_point_certification");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("seq", trials), &trials, |b, &n| {
        b.iter(|| black_box(par::map_trials_seq(n, kernel)))
    });
    group.bench_with_input(BenchmarkId::new("par", trials), &trials, |b, &n| {
        b.iter(|| black_box(par::map_trials(n, kernel)))
    });
    group.finish();
}

fn bench_witnesses(c: &mut Criterion) {
    let trials = 32u64;
    let alg = JordanAlgebra::parse("H(3,C)").unwrap();
    let kernel = |i: u64| {
        let mut rng = par::rng_for_trial(SEED, i);
        let problem = eja_core::automorphism::planted_problem(&alg, &mut rng).unwrap();
        eja_core::automorphism::homogeneity_witness(&alg, &problem, &mut rng)
            .unwrap()
            .cert
            .mult_residual
    };
    let mut group = c.benchmark_group("homogeneity_witness_h3c");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("seq", trials), &trials, |b, &n| {
        b.iter(|| black_box(par::map_trials_seq(n, kernel)))
    });
    group.bench_with_input(BenchmarkId::new("par", trials), &trials, |b, &n| {
        b.iter(|| black_box(par::map_trials(n, kernel)))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_jordan_identity,
    bench_midpoints,
    bench_plane_points,
    bench_witnesses
);
criterion_main!(benches);

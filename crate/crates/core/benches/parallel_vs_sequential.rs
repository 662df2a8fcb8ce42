//! Rayon-parallel hot paths against their always-sequential fallbacks.
//!
//! Both variants are compiled under the default `parallel` feature, so one
//! run compares them directly; building with `--no-default-features` makes
//! the parallel entry points themselves run the sequential code.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use opclt::algebra::{rat, Complex64, ComplexScalar};
use opclt::clt::{finite_n_coefficient, finite_n_coefficient_seq};
use opclt::hyper::{
    self, ExponentPair, GridSpec, TensorCheckConfig,
};
use opclt::measures::{two_point_measure, Measure};
use opclt::operators::{
    k_matrix, k_matrix_seq, semigroup_operator, semigroup_operator_f64,
};

fn skewed_two_atom() -> Measure {
    Measure::from_atoms(vec![(rat(-2, 1), rat(1, 5)), (rat(1, 2), rat(4, 5))]).unwrap()
}

fn bench_k_matrix(c: &mut Criterion) {
    let g = Measure::gaussian();
    let om = ComplexScalar::new(rat(1, 3), rat(1, 7));
    let op = semigroup_operator(&g, &om, 10).unwrap();
    let mut group = c.benchmark_group("k_matrix_cutoff10");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| k_matrix(black_box(&op), &g, 10).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| k_matrix_seq(black_box(&op), &g, 10).unwrap())
    });
    group.finish();
}

fn bench_finite_n(c: &mut Criterion) {
    let sk = skewed_two_atom();
    let om = ComplexScalar::from_ratio(1, 3);
    let km = k_matrix(&semigroup_operator(&sk, &om, 8).unwrap(), &sk, 8).unwrap();
    let mut group = c.benchmark_group("finite_n_l8_m8_n10000");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| finite_n_coefficient(black_box(&km), 8, 8, 10_000).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| finite_n_coefficient_seq(black_box(&km), 8, 8, 10_000).unwrap())
    });
    group.finish();
}

fn bench_ratio_scan(c: &mut Criterion) {
    let pq = ExponentPair::new(1.5, 3.0).unwrap();
    let omega = Complex64::new(0.0, 0.5f64.sqrt());
    let grid = GridSpec { steps: 120, ..GridSpec::default() };
    let mut group = c.benchmark_group("two_point_scan_120x120");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| hyper::two_point_ratio_scan(&pq, black_box(omega), &grid).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| hyper::two_point_ratio_scan_seq(&pq, black_box(omega), &grid).unwrap())
    });
    group.finish();
}

fn bench_tensor_check(c: &mut Criterion) {
    let tp = two_point_measure();
    let pq = ExponentPair::new(1.5, 3.0).unwrap();
    let op = semigroup_operator_f64(&tp, Complex64::new(0.0, 0.5f64.sqrt()), 2).unwrap();
    let cfg = TensorCheckConfig::new(4, 200, 42);
    let mut group = c.benchmark_group("tensor_check_n4_200trials");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| hyper::tensor_contraction_check(black_box(&op), &tp, &tp, &pq, &cfg).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            hyper::tensor_contraction_check_seq(black_box(&op), &tp, &tp, &pq, &cfg).unwrap()
        })
    });
    group.finish();
}

fn bench_grid_oracle(c: &mut Criterion) {
    let tp = two_point_measure();
    let op = semigroup_operator_f64(&tp, Complex64::new(0.0, 0.5), 4).unwrap();
    let mut group = c.benchmark_group("grid_oracle_n10_l4_m4");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| hyper::tensor_grid_coefficient(black_box(&op), &tp, 4, 4, 10).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| hyper::tensor_grid_coefficient_seq(black_box(&op), &tp, 4, 4, 10).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_k_matrix,
    bench_finite_n,
    bench_ratio_scan,
    bench_tensor_check,
    bench_grid_oracle
);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qzeta_bench::{index, q, real, weight_eight};
use qzeta_core::fseries::{check_f_identity, f_series, FKind, FSpec};
use qzeta_core::limits::{default_q_grid, q_to_1_extrapolate};
use qzeta_core::qmzf::{zeta_q, zeta_q_two_cont};
use qzeta_core::sumformula::{check_sum_formula_qmzv, g_closed_form, interpolated_sum_depth2, GSpec};
use qzeta_core::TruncationPolicy;

fn nested_series(c: &mut Criterion) {
    let p = TruncationPolicy::default();
    let mut group = c.benchmark_group("zeta_q");
    for qv in [0.5, 0.8] {
        for (name, idx) in weight_eight() {
            group.bench_with_input(BenchmarkId::new(name, qv), &idx, |b, idx| {
                b.iter(|| zeta_q(black_box(idx), q(qv), &p))
            });
        }
    }
    group.finish();
}

fn sum_formula(c: &mut Criterion) {
    let p = TruncationPolicy::default();
    c.bench_function("sum_formula/k7_r4_q0.8", |b| {
        b.iter(|| check_sum_formula_qmzv(black_box(7), 4, q(0.8), &p))
    });
}

fn continuation(c: &mut Criterion) {
    let p = TruncationPolicy::default();
    let mut group = c.benchmark_group("strip");
    for alpha in [3.0, 20.0, 200.0] {
        group.bench_with_input(BenchmarkId::new("zeta_q_two_cont", alpha), &alpha, |b, &a| {
            b.iter(|| zeta_q_two_cont(real(1.5), real(black_box(a)), q(0.5), &p))
        });
    }
    group.finish();
}

fn interpolated(c: &mut Criterion) {
    let p = TruncationPolicy::default();
    let mut group = c.benchmark_group("interpolated_sum");
    group.sample_size(10);
    for s in [2.5, 1.5] {
        group.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, &s| {
            b.iter(|| interpolated_sum_depth2(real(black_box(s)), q(0.5), &p))
        });
    }
    group.finish();
}

fn f_and_g(c: &mut Criterion) {
    let p = TruncationPolicy::default();
    let spec = FSpec::new(FKind::Three, 3, real(6.5), 2);
    c.bench_function("f_series/F3_D3_d2", |b| b.iter(|| f_series(black_box(&spec), q(0.5), &p)));
    c.bench_function("f_identity/D5_d2_q0.8", |b| {
        b.iter(|| check_f_identity(black_box(5), real(6.0), 2, q(0.8), &p))
    });
    let g = GSpec::new(3, vec![real(1.0)], real(5.25));
    c.bench_function("g_closed_form/a1_b3", |b| b.iter(|| g_closed_form(black_box(&g), q(0.5), &p)));
}

fn limit(c: &mut Criterion) {
    let p = TruncationPolicy::default();
    let grid = default_q_grid();
    let mut group = c.benchmark_group("q_to_1");
    group.sample_size(10);
    group.bench_function("zeta2", |b| b.iter(|| q_to_1_extrapolate(black_box(&index(&[2.0])), &grid, &p)));
    group.finish();
}

criterion_group!(benches, nested_series, sum_formula, continuation, interpolated, f_and_g, limit);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use polyreal::kv::{self, build_kv, kv_candidate};
use polyreal::matrixcore::operator_norm;
use polyreal::polynomial::{eval_tuple, torus_sup};
use polyreal::scattering::{check_dissipative, transfer_taylor};
use polyreal::{ComplexMatrix, SearchOptions};
use std::hint::black_box;

fn norms(c: &mut Criterion) {
    let kv = build_kv();
    let m = eval_tuple(&kv.p, &kv.t).unwrap();
    c.bench_function("operator_norm 5x5", |b| b.iter(|| operator_norm(black_box(&m))));
    c.bench_function("eval_tuple kv", |b| b.iter(|| eval_tuple(black_box(&kv.p), &kv.t)));
}

fn searches(c: &mut Criterion) {
    let kv = build_kv();
    let mut group = c.benchmark_group("torus");
    group.sample_size(10);
    group.bench_function("torus_sup kv 64/200", |b| {
        b.iter(|| torus_sup(black_box(&kv.p), SearchOptions::new(64, 200)))
    });
    let s = kv_candidate(0.6);
    group.bench_function("check_dissipative kv candidate", |b| {
        b.iter(|| check_dissipative(black_box(&s), SearchOptions::default(), 1e-9))
    });
    let x = vec![ComplexMatrix::identity(2).scale_real(1.0 / 3.0); 3];
    group.bench_function("tensor_contractivity 2x2", |b| {
        b.iter(|| kv::tensor_contractivity(&kv, black_box(&x), SearchOptions::new(24, 60)))
    });
    group.finish();
}

fn taylor(c: &mut Criterion) {
    let s = kv_candidate(0.6);
    c.bench_function("transfer_taylor degree 16", |b| {
        b.iter(|| transfer_taylor(black_box(&s), 16))
    });
}

criterion_group!(benches, norms, searches, taylor);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kr_bench::{
    closure_order, decompose, full_monoid_generators, seven_state_partition_cascade, six_state_decomposition_cascade,
};
use kr_core::fixtures;
use std::hint::black_box;

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    for n in [3, 4, 5] {
        let gens = full_monoid_generators(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &gens, |b, gens| {
            b.iter(|| closure_order(n, black_box(gens)))
        });
    }
    group.finish();
}

fn cascades(c: &mut Criterion) {
    c.bench_function("partition cascade/seven-state", |b| b.iter(seven_state_partition_cascade));
    c.bench_function("decomposition cascade/six-state", |b| b.iter(six_state_decomposition_cascade));
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    group.sample_size(10);
    let small = fixtures::three_state_reset_and_merge();
    group.bench_function("three-state", |b| b.iter(|| decompose(black_box(&small), false)));
    let five = fixtures::five_state_cycle_and_merge();
    group.bench_function("five-state/serial", |b| b.iter(|| decompose(black_box(&five), false)));
    group.bench_function("five-state/parallel", |b| b.iter(|| decompose(black_box(&five), true)));
    group.finish();
}

criterion_group!(benches, closure, cascades, pipeline);
criterion_main!(benches);

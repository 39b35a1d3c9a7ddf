use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use topa_bench::{scenario_a, scenario_b};
use topa_core::{build_context, min_power_bruteforce, sample_feasible_region, solve_position};

fn solve(c: &mut Criterion) {
    let a = scenario_a();
    let b = scenario_b();
    let mut group = c.benchmark_group("solve_position");
    group.bench_function("scenario_a", |bench| bench.iter(|| solve_position(black_box(&a)).unwrap()));
    group.bench_function("scenario_b", |bench| bench.iter(|| solve_position(black_box(&b)).unwrap()));
    group.finish();
}

fn region(c: &mut Criterion) {
    let a = scenario_a();
    let ctx = build_context(&a, 6.0).unwrap();
    let mut group = c.benchmark_group("feasible_region");
    group.sample_size(10);
    group.bench_function("scenario_a/0.5m", |bench| {
        bench.iter(|| sample_feasible_region(&ctx, black_box(&a), 0.5).unwrap())
    });
    group.bench_function("bruteforce_a/0.25m", |bench| {
        bench.iter(|| min_power_bruteforce(black_box(&a), 0.25).unwrap())
    });
    group.finish();
}

criterion_group!(benches, solve, region);
criterion_main!(benches);

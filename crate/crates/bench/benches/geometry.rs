use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use topa_bench::segment_fixtures;
use topa_core::segment_intersects_box;

fn segment_box(c: &mut Criterion) {
    let (building, segments) = segment_fixtures(1024);
    let mut group = c.benchmark_group("geometry");
    group.throughput(Throughput::Elements(segments.len() as u64));
    group.bench_function("segment_intersects_box/1024", |b| {
        b.iter(|| {
            segments
                .iter()
                .filter(|(p, q)| segment_intersects_box(black_box(*p), black_box(*q), &building).unwrap())
                .count()
        })
    });
    group.finish();
}

criterion_group!(benches, segment_box);
criterion_main!(benches);

//! Benchmarks the enumeration core in its sequential and data-parallel
//! configurations. `--threads 1` forces the strictly sequential path;
//! `--threads 0` uses the ambient worker pool (a no-op split when the
//! `parallel` feature is disabled or one CPU is available).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flowq::enumerate::{self, EnumOptions};
use flowq::{FieldParams, Multigraph};
use std::hint::black_box;

fn bench_s_table(c: &mut Criterion) {
    let cases = [("k4_q7", "k4", 7u64), ("k33_q5", "k33", 5)];
    let mut group = c.benchmark_group("s_table");
    group.sample_size(10);
    for (label, name, q) in cases {
        let g = Multigraph::named(name).unwrap();
        let fp = FieldParams::from_order(q).unwrap();
        for (mode, threads) in [("sequential", 1usize), ("parallel", 0)] {
            let opts = EnumOptions {
                threads,
                ..EnumOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(mode, label), &opts, |b, opts| {
                b.iter(|| {
                    let t = enumerate::s_table(black_box(&g), &fp, opts).unwrap();
                    black_box(t.flow_value)
                })
            });
        }
    }
    group.finish();
}

fn bench_nonsingular(c: &mut Criterion) {
    let g = Multigraph::named("k4").unwrap();
    let fp = FieldParams::from_order(5).unwrap();
    let mut group = c.benchmark_group("nonsingular_count");
    group.sample_size(10);
    for (mode, threads) in [("sequential", 1usize), ("parallel", 0)] {
        let opts = EnumOptions {
            reduction: false,
            threads,
            ..EnumOptions::default()
        };
        group.bench_with_input(BenchmarkId::new(mode, "k4_q5"), &opts, |b, opts| {
            b.iter(|| black_box(enumerate::nonsingular_count(black_box(&g), &fp, opts).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_s_table, bench_nonsingular);
criterion_main!(benches);

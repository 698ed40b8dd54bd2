//! Parallel versus sequential on the two embarrassingly parallel workloads:
//! the registry sweep and a hunt grid.
//!
//! `cargo bench -p nahm-forge --bench engine`. Without the `parallel` feature
//! both variants run the sequential path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nahm_forge::par;
use nahm_forge::rat::int;
use nahm_forge::recognize::{half_grid, hunt, RecognizeConfig};
use nahm_forge::registry::{verify_all, Status, SuiteOrders};

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_all theorems, order 120");
    g.sample_size(10);
    let run = || verify_all(SuiteOrders::uniform(120), Some(&[Status::Theorem]));
    g.bench_function("parallel", |b| b.iter(|| black_box(run())));
    g.bench_function("sequential", |b| b.iter(|| black_box(par::sequential(run))));
    g.finish();
}

fn grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("hunt Example 1 grid, order 120");
    g.sample_size(10);
    let a = vec![vec![int(2), int(1)], vec![int(2), int(2)]];
    let points = half_grid(-4..=4, -2..=4);
    let cfg = RecognizeConfig::default();
    let run = || hunt(&a, &[1, 2], &points, int(120), &cfg).unwrap();
    g.bench_function("parallel", |b| b.iter(|| black_box(run())));
    g.bench_function("sequential", |b| b.iter(|| black_box(par::sequential(run))));
    g.finish();
}

criterion_group!(benches, sweep, grid);
criterion_main!(benches);

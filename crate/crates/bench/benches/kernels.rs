use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use flr_bench::{noisy_values, study1_dataset};
use flr_core::presmooth::{series_smooth, NoisyCurve};
use flr_core::{eigendecompose, empirical_covariance, fit, CutoffRule, Grid, RegimeParams};

fn eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigendecompose");
    for p in [51, 101, 201] {
        let data = study1_dataset(p, 100, 1);
        let k = empirical_covariance(data.curves()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &k, |b, k| {
            b.iter(|| eigendecompose(black_box(k), 100).unwrap())
        });
    }
    group.finish();
}

fn fitting(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    group.sample_size(20);
    for n in [100, 400] {
        let data = study1_dataset(201, n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| {
                fit(black_box(data), &CutoffRule::Threshold { t: 0.05 }, &RegimeParams::default()).unwrap()
            })
        });
    }
    group.finish();
}

fn smoothing(c: &mut Criterion) {
    let target = Grid::uniform(201).unwrap();
    let mut group = c.benchmark_group("series_smooth");
    for (k, order) in [(200, 5), (200, 50), (500, 7)] {
        let curve = NoisyCurve::new(&Grid::uniform(k).unwrap(), noisy_values(k)).unwrap();
        group.bench_function(format!("k{k}_order{order}"), |b| {
            b.iter(|| series_smooth(black_box(&curve), order, &target).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eigen, fitting, smoothing);
criterion_main!(benches);

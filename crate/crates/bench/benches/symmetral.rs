use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use minksym_bench::{fixture_pair, M};
use minksym_core::oracle::naive_minkowski_sum;
use minksym_core::{minkowski_sum, sphere_quadrature, symmetral, Direction, GridAngle, IntervalBody, SupportBody};

fn raster(c: &mut Criterion) {
    let (a, b) = fixture_pair(3);
    let angle = GridAngle::new(137, M).unwrap();
    let mut group = c.benchmark_group("symmetral");
    for g in [256, 512, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(g), &g, |bench, &g| {
            bench.iter(|| symmetral(black_box(&a), angle, g).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("minkowski_sum");
    for g in [512, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(g), &g, |bench, &g| {
            bench.iter(|| minkowski_sum(black_box(&a), black_box(&b), g).unwrap())
        });
    }
    group.finish();
}

fn naive(c: &mut Criterion) {
    let (a, b) = fixture_pair(5);
    let mut group = c.benchmark_group("naive_sum");
    group.sample_size(10);
    for g in [32, 64] {
        group.bench_with_input(BenchmarkId::from_parameter(g), &g, |bench, &g| {
            bench.iter(|| naive_minkowski_sum(black_box(&a), black_box(&b), g).unwrap())
        });
    }
    group.finish();
}

fn support(c: &mut Criterion) {
    let (a, _) = fixture_pair(7);
    let planar = SupportBody::from_star(&a).unwrap();
    let u = GridAngle::new(41, M).unwrap().direction();
    c.bench_function("support_symmetral/grid", |bench| {
        bench.iter(|| planar.symmetral_support(black_box(&u)).unwrap())
    });

    let mut group = c.benchmark_group("support_symmetral/cloud");
    for n in [3, 8] {
        let cloud = Arc::new(sphere_quadrature(n, 512 * n).unwrap());
        let body = SupportBody::from_interval(cloud.clone(), &IntervalBody::new(1.0, Direction::axis(n, 0).unwrap()).unwrap())
            .unwrap();
        let u = cloud.nodes()[1].clone();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| body.symmetral_support(black_box(&u)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, raster, naive, support);
criterion_main!(benches);

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};
use cyclavg::averaging::{positive_roots, DEFAULT_BRACKET, DEFAULT_TOL};
use cyclavg::classifier::scan;
use cyclavg::flow::{find_fixed_points, DEFAULT_FIXED_POINT_TOL};
use cyclavg::presets;
use cyclavg::{angular_integrals, averaged_function, return_map, synthesize_coefficients};

fn integrals(c: &mut Criterion) {
    let spec = presets::example2().perturbation().unwrap().clone();
    c.bench_function("angular_integrals/example2", |b| {
        b.iter(|| angular_integrals(black_box(&spec), DEFAULT_TOL).unwrap())
    });
    let h = averaged_function(&spec.with_b(vec![1.0, 1.0, -1.0, 0.1]).unwrap(), DEFAULT_TOL).unwrap();
    c.bench_function("positive_roots/example2", |b| {
        b.iter(|| positive_roots(black_box(&h), DEFAULT_BRACKET, 1e-12).unwrap())
    });
    let betas = [0.5, 1.0, 1.5, 2.0, 2.5];
    let targets = [0.6, 1.0, 1.7, 2.9];
    c.bench_function("synthesize/5", |b| {
        b.iter(|| synthesize_coefficients(black_box(&betas), black_box(&targets)).unwrap())
    });
}

fn flow(c: &mut Criterion) {
    let vdp = presets::vdp().perturbation().unwrap().normalized();
    c.bench_function("return_map/vdp", |b| b.iter(|| return_map(black_box(&vdp), 1.1).unwrap()));
    let mut group = c.benchmark_group("fixed_points");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    group.bench_function("vdp", |b| {
        b.iter(|| find_fixed_points(black_box(&vdp), (0.5, 2.0), DEFAULT_FIXED_POINT_TOL).unwrap())
    });
    group.finish();
}

fn classifier(c: &mut Criterion) {
    let mut group = c.benchmark_group("classifier");
    group.sample_size(10);
    group.bench_function("scan/2", |b| b.iter(|| scan(black_box(2))));
    group.bench_function("scan/3", |b| b.iter(|| scan(black_box(3))));
    group.finish();
}

criterion_group!(benches, integrals, flow, classifier);
criterion_main!(benches);

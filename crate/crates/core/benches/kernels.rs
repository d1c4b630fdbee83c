//! Each kernel timed twice: on rayon's global pool and inside a one-thread
//! pool. With `--no-default-features` both columns run the sequential code.

use cocycle_core::ball::*;
use cocycle_core::circle::*;
use cocycle_core::crossed::{builtin_instances, Axiom};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const SPEC: WaveSpec = WaveSpec { waves: 4, max_wavenumber: 2.0, amplitude: 0.8 };

fn pools() -> [(&'static str, rayon::ThreadPool); 2] {
    let many = rayon::ThreadPoolBuilder::new().build().unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    [("parallel", many), ("sequential", one)]
}

fn circle(c: &mut Criterion) {
    let z = CircleAlgebraField::<2>::random_band_limited(1, 1024, 12, 1.0).unwrap();
    let f1 = CircleGroupField::exp(&CircleAlgebraField::random_band_limited(2, 1024, 12, 1.0).unwrap());
    let path = exp_path(&CircleAlgebraField::<2>::random_band_limited(3, 256, 8, 1.0).unwrap(), 200).unwrap();
    let z256 = CircleAlgebraField::<2>::random_band_limited(4, 256, 8, 1.0).unwrap();
    let mut group = c.benchmark_group("circle");
    for (label, pool) in pools() {
        group.bench_function(BenchmarkId::new("closed_form_n1024", label), |b| {
            pool.install(|| b.iter(|| closed_form_coboundary(black_box(&f1), black_box(&z)).unwrap()))
        });
        group.bench_function(BenchmarkId::new("path_n256_t200", label), |b| {
            pool.install(|| b.iter(|| path_coboundary(black_box(&path), black_box(&z256), PathOptions::default()).unwrap()))
        });
    }
    group.finish();
}

fn ball(c: &mut Criterion) {
    let g = BallGrid::cube(24).unwrap();
    let a = random_potential::<3>(g, 1, &SPEC).unwrap();
    let x = BallAlgebraField::<3>::random(g, BoundaryClass::Loop, 2, &SPEC).unwrap();
    let y = BallAlgebraField::<3>::random(g, BoundaryClass::Loop, 3, &SPEC).unwrap();
    let f = BallGroupField::<3>::random(g, BoundaryClass::Free, 4, &SPEC).unwrap();
    let mut group = c.benchmark_group("ball24");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(BenchmarkId::new("exterior_derivative", label), |b| {
            pool.install(|| b.iter(|| black_box(&a).d().unwrap()))
        });
        group.bench_function(BenchmarkId::new("mf_cocycle", label), |b| {
            pool.install(|| b.iter(|| mf_cocycle(black_box(&a), &x, &y).unwrap()))
        });
        group.bench_function(BenchmarkId::new("conjugated_cocycle", label), |b| {
            pool.install(|| b.iter(|| conjugated_cocycle(black_box(&a), &x, &y, &f).unwrap()))
        });
    }
    group.finish();
}

fn crossed(c: &mut Criterion) {
    let instances = builtin_instances();
    let mut group = c.benchmark_group("crossed200");
    for (label, pool) in pools() {
        for inst in &instances {
            group.bench_function(BenchmarkId::new(inst.name(), label), |b| {
                pool.install(|| b.iter(|| inst.check(Axiom::Peiffer, 200, black_box(7)).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, circle, ball, crossed);
criterion_main!(benches);

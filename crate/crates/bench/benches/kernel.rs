use criterion::{criterion_group, criterion_main, Criterion};
use slitflat::construct::preset;
use slitflat::decompose::decompose;
use slitflat::enumerate::{enumerate_saddle_connections, EnumerateConfig};
use slitflat::scalar::{frac, scalar};
use slitflat::spectrum::{derived_depth, theta_set};
use slitflat::tracer::{trace, TraceConfig};
use slitflat::{SurfacePoint, Vec2};

fn bench_scan(c: &mut Criterion) {
    let torus = preset("one-slit-torus").unwrap();
    let staircase = preset("sn:2").unwrap();
    c.bench_function("scan one-slit-torus L=10", |b| {
        b.iter(|| enumerate_saddle_connections(&torus, &EnumerateConfig::new(scalar(100))))
    });
    c.bench_function("scan sn:2 L=10", |b| {
        b.iter(|| enumerate_saddle_connections(&staircase, &EnumerateConfig::new(scalar(100))))
    });
}

fn bench_decompose(c: &mut Criterion) {
    let torus = preset("one-slit-torus").unwrap();
    let staircase = preset("sn:2").unwrap();
    c.bench_function("decompose one-slit-torus (7,1)", |b| {
        b.iter(|| decompose(&torus, &Vec2::new(scalar(7), scalar(1))).unwrap())
    });
    c.bench_function("decompose sn:2 (2,3)", |b| {
        b.iter(|| decompose(&staircase, &Vec2::new(scalar(2), scalar(3))).unwrap())
    });
}

fn bench_trace(c: &mut Criterion) {
    let torus = preset("one-slit-torus").unwrap();
    let start = SurfacePoint::new(0, Vec2::new(frac(1, 3), frac(1, 7)));
    let dir = Vec2::new(scalar(13), scalar(8));
    c.bench_function("trace (13,8) budget 200", |b| {
        b.iter(|| trace(&torus, &start, &dir, &TraceConfig::new(scalar(40_000))).unwrap())
    });
}

fn bench_spectrum(c: &mut Criterion) {
    let torus = preset("one-slit-torus").unwrap();
    c.bench_function("spectrum one-slit-torus L=10", |b| {
        b.iter(|| {
            let spec = theta_set(&torus, &scalar(100));
            derived_depth(&spec, &frac(1, 1000), 12)
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_scan, bench_decompose, bench_trace, bench_spectrum
}
criterion_main!(benches);

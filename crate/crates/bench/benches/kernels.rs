use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curvelab_bench::{frequencies, moment3, step_functions, unit_bump};
use curvelab_core::lorentz::{lorentz_norm, LorentzIndex};
use curvelab_core::osc::extension;
use curvelab_core::positivity::{tp_ratio_lu, tp_ratio_series, ExpMatrixSpec};
use curvelab_core::vandermonde::sublevel_measure;

fn bench_extension(c: &mut Criterion) {
    let curve = moment3();
    let f = unit_bump();
    let mut group = c.benchmark_group("extension");
    for (lambda, xi) in [16.0, 256.0, 4096.0].iter().zip(frequencies(&[16.0, 256.0, 4096.0])) {
        group.bench_with_input(BenchmarkId::from_parameter(lambda), &xi, |b, xi| {
            b.iter(|| extension(&curve, &f, black_box(xi), 1e-10).unwrap())
        });
    }
    group.finish();
}

fn bench_tp_ratio(c: &mut Criterion) {
    let near = ExpMatrixSpec::new(vec![-0.4, 0.1, 0.5], vec![0.0, 0.2, 0.3]).unwrap();
    let far = ExpMatrixSpec::new(vec![-2.0, 0.5, 2.5], vec![-1.0, 0.4, 2.0]).unwrap();
    c.bench_function("tp_ratio/series", |b| b.iter(|| tp_ratio_series(black_box(&near))));
    c.bench_function("tp_ratio/lu", |b| b.iter(|| tp_ratio_lu(black_box(&far)).unwrap()));
}

fn bench_lorentz(c: &mut Criterion) {
    let fs = step_functions(64, 3);
    let idx = LorentzIndex::new(7.0, 3.5).unwrap();
    c.bench_function("lorentz_norm/64", |b| {
        b.iter(|| fs.iter().map(|f| lorentz_norm(f, idx)).sum::<f64>())
    });
}

fn bench_sublevel(c: &mut Criterion) {
    let mut group = c.benchmark_group("sublevel");
    group.sample_size(10);
    for d in [2usize, 3, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| sublevel_measure(d, 1.0, 10_000, 1).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, bench_extension, bench_tp_ratio, bench_lorentz, bench_sublevel);
criterion_main!(kernels);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exceedance_bench::{balanced, five_percent};
use exceedance_core::lehmann::power_with_engine;
use exceedance_core::sim::permutation_oracle;
use exceedance_core::{
    critical_value, joint_pmf_null, Design, LehmannEngine, LehmannParam, PrecisionPolicy, VNullDistribution,
};

fn null_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("null_table");
    for d in balanced(&[20, 40, 100]) {
        group.bench_with_input(BenchmarkId::from_parameter(d.m), &d, |b, d| {
            b.iter(|| VNullDistribution::from_table(&joint_pmf_null(black_box(d))))
        });
    }
    group.finish();

    let alpha = five_percent();
    c.bench_function("critical_value/m=n=40 (cached)", |b| {
        let d = balanced(&[40])[0];
        b.iter(|| critical_value(black_box(&d), &alpha).unwrap())
    });
}

fn lehmann_tables(c: &mut Criterion) {
    let eta = LehmannParam::new(2.0).unwrap();
    let mut group = c.benchmark_group("lehmann_table");
    group.sample_size(20);
    for d in balanced(&[10, 20, 40]) {
        group.bench_with_input(BenchmarkId::new("fresh_engine", d.m), &d, |b, d| {
            b.iter(|| {
                let engine = LehmannEngine::new(d.m, d.n, eta, PrecisionPolicy::default()).unwrap();
                engine.table(black_box(d)).unwrap()
            })
        });
    }
    group.finish();

    let alpha = five_percent();
    c.bench_function("power/m=40 all thresholds, shared engine", |b| {
        b.iter(|| {
            let engine = LehmannEngine::new(40, 40, eta, PrecisionPolicy::default()).unwrap();
            (0..6)
                .map(|k| power_with_engine(&engine, &Design::new(40, 40, 2 * k, 2 * k).unwrap(), &alpha).unwrap().beta)
                .sum::<f64>()
        })
    });
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("permutation_oracle");
    group.sample_size(10);
    for m in [6usize, 8, 10] {
        let d = Design::new(m, m, 1, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(2 * m), &d, |b, d| {
            b.iter(|| permutation_oracle(black_box(d)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, null_tables, lehmann_tables, enumeration);
criterion_main!(benches);

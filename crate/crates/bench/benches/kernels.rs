use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qhecke::forms::{EtaQuotient, NamedForm};
use qhecke::hecke::{hecke, shimura, HeckeSpec};
use qhecke_bench::dense_unit;

fn multiply(c: &mut Criterion) {
    let mut g = c.benchmark_group("mul");
    for bound in [500, 2000, 8000] {
        let (a, b) = (dense_unit(bound), dense_unit(bound).theta());
        g.bench_with_input(BenchmarkId::from_parameter(bound), &bound, |bch, _| bch.iter(|| black_box(&a).mul(&b)));
    }
    g.finish();
}

fn divide(c: &mut Criterion) {
    let mut g = c.benchmark_group("div");
    for bound in [500, 2000] {
        let (a, b) = (dense_unit(bound).theta(), dense_unit(bound));
        g.bench_with_input(BenchmarkId::from_parameter(bound), &bound, |bch, _| {
            bch.iter(|| black_box(&a).div(&b).unwrap())
        });
    }
    g.finish();
}

fn power(c: &mut Criterion) {
    let mut g = c.benchmark_group("pow");
    let pbar = NamedForm::Pbar.expand(4000).unwrap();
    for e in [-31, -7, 7] {
        g.bench_with_input(BenchmarkId::new("Pbar", e), &e, |bch, &e| bch.iter(|| black_box(&pbar).pow_int(e).unwrap()));
    }
    g.finish();
}

fn eta_expand(c: &mut Criterion) {
    let q: EtaQuotient = "eta(1t)^16 * eta(2t)^4".parse().unwrap();
    c.bench_function("eta_expand/10000", |bch| bch.iter(|| black_box(&q).expand(10_000).unwrap()));
}

fn operators(c: &mut Criterion) {
    let f = NamedForm::Pbar.expand(20_000).unwrap().pow_int(-7).unwrap();
    let mut g = c.benchmark_group("hecke");
    for ell in [3, 7, 13] {
        let spec = HeckeSpec::trivial(ell, 3).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(ell), &spec, |bch, spec| {
            bch.iter(|| hecke(black_box(&f), spec).unwrap())
        });
    }
    g.finish();
    c.bench_function("shimura/t7_k7", |bch| bch.iter(|| shimura(black_box(&f), 7, 7).unwrap()));
}

criterion_group!(benches, multiply, divide, power, eta_expand, operators);
criterion_main!(benches);

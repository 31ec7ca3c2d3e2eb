use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use relhur::hopfion::{gamma_h, HopfionState};
use relhur::hydrogen::{quadrature_oracle, CoulombState};
use relhur::quadrature::QuadConfig;
use relhur::specfun::bessel_k;
use relhur::{gamma_bound, RelativisticScale};

fn specfun(c: &mut Criterion) {
    let mut group = c.benchmark_group("bessel_k");
    for x in [0.01, 1.0, 30.0] {
        group.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| bessel_k(2, black_box(x)).unwrap())
        });
    }
    group.finish();
}

fn bound(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_bound");
    for (name, d) in [
        ("0", RelativisticScale::Finite(0.0)),
        ("1", RelativisticScale::Finite(1.0)),
        ("inf", RelativisticScale::Infinite),
    ] {
        group.bench_function(name, |b| b.iter(|| gamma_bound(black_box(d), 1e-7).unwrap()));
    }
    group.finish();
}

fn states(c: &mut Criterion) {
    let cfg = QuadConfig::default();
    let mut group = c.benchmark_group("states");
    group.sample_size(10);
    let hop = HopfionState::new(1.0).unwrap();
    group.bench_function("gamma_h(a=1)", |b| b.iter(|| gamma_h(&hop, &cfg).unwrap()));
    let z80 = CoulombState::new(80).unwrap();
    group.bench_function("hydrogen oracle Z=80", |b| {
        b.iter(|| quadrature_oracle(&z80, &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, specfun, bound, states);
criterion_main!(benches);

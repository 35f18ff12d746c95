use std::hint::black_box;

use coreep::checker::{find_check, run_check, MatrixSweep};
use coreep::matrix::{bc_core_ep, bc_core_ep_index};
use coreep::search::find_bc_core_ep;
use coreep::{FiniteStarMonoid, SweepConfig, Tolerances};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn exact_search(c: &mut Criterion) {
    let z8 = FiniteStarMonoid::zn(8).unwrap();
    let e = |i| z8.element(i).unwrap();
    c.bench_function("z8_index_set", |b| {
        b.iter(|| find_bc_core_ep(&z8, e(1), e(1), e(2), black_box(10)))
    });

    let mut group = c.benchmark_group("core_ep_equivalences_sweep");
    group.sample_size(10);
    for n in [6, 12] {
        let m = FiniteStarMonoid::zn(n).unwrap();
        let def = find_check("core_ep_equivalences").unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| run_check(m, def, &SweepConfig::default()))
        });
    }
    group.finish();
}

fn numeric(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("matrix");
    for n in [4, 8, 16] {
        let sweep = MatrixSweep {
            n,
            count: 1,
            ..MatrixSweep::default()
        };
        let inst = sweep.instance(2);
        group.bench_with_input(BenchmarkId::new("bc_core_ep_index", n), &inst, |b, i| {
            b.iter(|| bc_core_ep_index(&i.a, &i.b, &i.c, None, &tol).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bc_core_ep", n), &inst, |b, i| {
            b.iter(|| bc_core_ep(&i.a, &i.b, &i.c, None, &tol).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact_search, numeric);
criterion_main!(benches);

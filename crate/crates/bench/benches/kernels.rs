use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use permcirc_bench::{circuit, random_matrix, random_poly};
use permcirc_core::gf2::{count_gap, GapLimits};
use permcirc_core::permanent::{per_glynn_exact, per_gurvits, per_naive, per_ryser};
use permcirc_core::{encode, label_circuit, normalize, simulate, BasisState, BoundaryAssignment, Mode};

criterion_group!(benches, permanents, sampling, gap, statevector, encoding);
criterion_main!(benches);

fn permanents(c: &mut Criterion) {
    let mut group = c.benchmark_group("permanent");
    group.sample_size(10);
    for n in [8, 12, 16, 20] {
        let m = random_matrix(n, n as u64);
        group.bench_with_input(BenchmarkId::new("ryser", n), &m, |b, m| {
            b.iter(|| per_ryser(black_box(m)))
        });
        group.bench_with_input(BenchmarkId::new("glynn", n), &m, |b, m| {
            b.iter(|| per_glynn_exact(black_box(m)))
        });
        if n <= 8 {
            group.bench_with_input(BenchmarkId::new("naive", n), &m, |b, m| {
                b.iter(|| per_naive(black_box(m)))
            });
        }
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let m = random_matrix(20, 7);
    c.bench_function("gurvits/n20_10k", |b| b.iter(|| per_gurvits(black_box(&m), 10_000, 1)));
}

fn gap(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_gap");
    group.sample_size(10);
    for v in [12, 16, 20] {
        let (f, vars) = random_poly(v, v as u64);
        group.bench_with_input(BenchmarkId::from_parameter(v), &(f, vars), |b, (f, vars)| {
            b.iter(|| count_gap(black_box(f), vars, GapLimits::default()))
        });
    }
    group.finish();
}

fn statevector(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    for q in [8, 12, 16] {
        let circ = circuit(q, 60, q as u64);
        let input = BasisState::zeros(q);
        group.bench_with_input(BenchmarkId::from_parameter(q), &circ, |b, circ| {
            b.iter(|| simulate(black_box(circ), &input))
        });
    }
    group.finish();
}

fn encoding(c: &mut Criterion) {
    let (circ, _) = normalize(&circuit(3, 40, 11));
    let l = label_circuit(&circ).unwrap();
    let b = BoundaryAssignment::new(BasisState::zeros(3), BasisState::zeros(3));
    c.bench_function("encode/graph-fix_q3_40", |bench| {
        bench.iter(|| encode(black_box(&l), &b, Mode::GraphFix))
    });
}

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gatedist::gates::{gate_distance, gate_fidelity_su2, oracle_min_overlap, optimal_probe_ncopies, probe_overlap};
use gatedist::numkit::eig_unitary;
use gatedist::Gate;
use gatedist_bench::{qubit_pair, rotation};

fn closed_forms(c: &mut Criterion) {
    let (u1, u2) = qubit_pair();
    c.bench_function("gate_fidelity_su2", |b| b.iter(|| gate_fidelity_su2(black_box(&u1), black_box(&u2))));
    c.bench_function("gate_distance", |b| b.iter(|| gate_distance(black_box(&u1), black_box(&u2))));
}

fn eigen(c: &mut Criterion) {
    let big = rotation(0.3).tensor_power(6).expect("within cap");
    c.bench_function("eig_unitary_64", |b| b.iter(|| eig_unitary(black_box(big.matrix()))));
}

fn probes(c: &mut Criterion) {
    let id = Gate::identity(2);
    let g = rotation(0.05);
    c.bench_function("ncopy_probe_32", |b| b.iter(|| optimal_probe_ncopies(black_box(&id), black_box(&g))));
    let p = optimal_probe_ncopies(&id, &g).expect("distinct gates");
    c.bench_function("probe_overlap_32", |b| b.iter(|| probe_overlap(&id, &g, black_box(&p), 32)));
}

fn oracle(c: &mut Criterion) {
    let (u1, u2) = qubit_pair();
    c.bench_function("oracle_n2_budget8", |b| b.iter(|| oracle_min_overlap(&u1, &u2, 2, 8, black_box(0))));
}

criterion_group!(benches, closed_forms, eigen, probes, oracle);
criterion_main!(benches);

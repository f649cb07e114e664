use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hopfield_bench::{filter, trk};
use hopfield::oracle::{build_hamiltonian, lowest_eigenvalues, FockTruncation, LanczosConfig};
use hopfield::spectrum::{ew_spectrum_closed, ew_spectrum_quadrature};
use hopfield::thermometry::thermo_point;
use hopfield::{mu_coefficients, polariton_frequencies, FockProduct};

fn bench_model(c: &mut Criterion) {
    let p = trk(0.35);
    c.bench_function("polariton_frequencies", |b| b.iter(|| polariton_frequencies(black_box(&p))));
    c.bench_function("mu_coefficients", |b| b.iter(|| mu_coefficients(black_box(&p))));
    c.bench_function("thermo_point", |b| b.iter(|| thermo_point(black_box(&p), black_box(0.3))));
}

fn bench_spectrum(c: &mut Criterion) {
    let p = trk(0.35);
    let f = filter(300);
    let state: FockProduct = "10".parse().unwrap();
    let mut group = c.benchmark_group("spectrum_300");
    group.bench_function("closed", |b| b.iter(|| ew_spectrum_closed(black_box(&p), state, &f)));
    group.sample_size(10);
    group.bench_function("quadrature", |b| b.iter(|| ew_spectrum_quadrature(black_box(&p), state, &f)));
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let p = trk(0.3);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for n in [30, 60] {
        group.bench_with_input(BenchmarkId::new("build_hamiltonian", n), &n, |b, &n| {
            b.iter(|| build_hamiltonian(&p, FockTruncation::rotated(n).unwrap()))
        });
        let h = build_hamiltonian(&p, FockTruncation::rotated(n).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("lanczos_16", n), &h, |b, h| {
            b.iter(|| lowest_eigenvalues(h, &LanczosConfig::lowest(16)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_model, bench_spectrum, bench_oracle);
criterion_main!(benches);

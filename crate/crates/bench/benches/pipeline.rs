use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use xychain::{
    assemble_rho, build_hopping, concurrence, diagonalize, linspace, run_random_zero_t,
    thermal_g_matrix, two_site_state, ChainSpec, ChainSpectra, DisorderSpec, Parity, Regime,
    SweepSpec,
};
use xychain_bench::disordered_chain;

fn spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("diagonalize");
    for n in [100, 250] {
        let (chain, field) = disordered_chain(n, 0.5);
        let hopping = build_hopping(&chain, &field, Parity::Even).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &hopping, |b, m| {
            b.iter(|| diagonalize(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn contractions(c: &mut Criterion) {
    let mut group = c.benchmark_group("ground_band");
    for n in [100, 250] {
        let (chain, field) = disordered_chain(n, 0.5);
        let spectra = ChainSpectra::new(&chain, &field).unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| {
                let state = spectra.ground_state(black_box(0.5));
                spectra.g_band(&state, 5)
            })
        });
    }
    group.finish();
    c.bench_function("thermal_limit_window", |b| {
        b.iter(|| thermal_g_matrix(black_box(0.5), 1.0, 0.05, 5).unwrap())
    });
}

fn pairs(c: &mut Criterion) {
    let (chain, field) = disordered_chain(100, 0.5);
    let spectra = ChainSpectra::new(&chain, &field).unwrap();
    let band = spectra.g_band(&spectra.ground_state(0.5), 5);
    c.bench_function("pair_concurrence_r5", |b| {
        b.iter(|| {
            let state = two_site_state(&band, black_box(40), 45).unwrap();
            concurrence(&assemble_rho(&state).unwrap())
        })
    });
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_sweep");
    group.sample_size(10);
    group.bench_function("n100_s20_h7", |b| {
        b.iter(|| {
            run_random_zero_t(
                &ChainSpec::new(100),
                &DisorderSpec::new(2.0, 0.3, 20, 2024),
                &SweepSpec::new(Regime::RandomZeroT, linspace(0.0, 3.0, 7)),
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, spectra, contractions, pairs, sweep);
criterion_main!(benches);

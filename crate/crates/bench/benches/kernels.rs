use std::f64::consts::FRAC_1_SQRT_2;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use ptm_core::circuits::apply_qft;
use ptm_core::dynamics::{ghz_state, lindblad_evolve, ChainConfig};
use ptm_core::fractal::closed_series;
use ptm_core::number_theory::zeta_ptm;
use ptm_core::ptm_seq::ptm_block;
use ptm_core::{DensityMatrix, C64};

fn block(c: &mut Criterion) {
    let mut g = c.benchmark_group("ptm_block");
    for order in [16u32, 20] {
        g.throughput(Throughput::Elements(1 << order));
        g.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &n| {
            b.iter(|| ptm_block(black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn qft(c: &mut Criterion) {
    let mut g = c.benchmark_group("fft_qft");
    for n in [12u32, 16, 20] {
        let amps: Vec<C64> = (0..1u64 << n)
            .map(|k| C64::new((k as f64).sin(), 0.0))
            .collect();
        g.throughput(Throughput::Elements(1 << n));
        g.bench_with_input(BenchmarkId::from_parameter(n), &amps, |b, amps| {
            b.iter_batched_ref(
                || amps.clone(),
                |v| apply_qft(v).unwrap(),
                criterion::BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let (a, b) = (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0));
    let mut g = c.benchmark_group("closed_spectrum");
    g.sample_size(10);
    for n in [12u32, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |bch, &n| {
            bch.iter(|| closed_series(black_box(n), a, b).unwrap())
        });
    }
    g.finish();
}

fn lindblad(c: &mut Criterion) {
    let mut g = c.benchmark_group("lindblad");
    g.sample_size(10);
    for n in [3u32, 5] {
        let cfg = ChainConfig {
            t_final: 0.2,
            ..ChainConfig::new(n)
        };
        let rho0 = DensityMatrix::from_pure(&ghz_state(n).unwrap());
        g.bench_with_input(BenchmarkId::from_parameter(n), &rho0, |b, rho0| {
            b.iter(|| lindblad_evolve(&cfg, rho0).unwrap())
        });
    }
    g.finish();
}

fn zeta(c: &mut Criterion) {
    c.bench_function("zeta_ptm/1e5", |b| {
        b.iter(|| zeta_ptm(black_box(C64::new(2.0, 1.0)), 100_000).unwrap())
    });
}

criterion_group!(benches, block, qft, spectrum, lindblad, zeta);
criterion_main!(benches);

use std::hint::black_box;

use coulomb_core::greens::{friedrichs_kernel, phi_norm_sq};
use coulomb_core::oracle::{fd_extrapolated, shoot_eigenvalue, FdConfig, ShootingConfig};
use coulomb_core::radial::ShiftFrame;
use coulomb_core::specfun::{digamma, whittaker};
use coulomb_core::spectra::assemble_spectrum;
use coulomb_core::{CoulombParams, ExtendedReal};
use criterion::{criterion_group, criterion_main, Criterion};

fn specfun(c: &mut Criterion) {
    c.bench_function("digamma", |b| b.iter(|| digamma(black_box(-2.37))));
    let mut g = c.benchmark_group("whittaker");
    for rho in [0.5, 10.0, 80.0] {
        g.bench_function(format!("rho={rho}"), |b| b.iter(|| whittaker(black_box(0.3), black_box(rho))));
    }
    g.finish();
}

fn resolvent(c: &mut Criterion) {
    let f = ShiftFrame::new(-1.0, 0.5).unwrap();
    c.bench_function("friedrichs_kernel", |b| b.iter(|| friedrichs_kernel(&f, black_box(1.0), black_box(2.0))));
    c.bench_function("phi_norm_sq", |b| b.iter(|| phi_norm_sq(black_box(&f))));
}

fn spectra(c: &mut Criterion) {
    let p = CoulombParams::new(-1.0, 0.0).unwrap();
    c.bench_function("spectrum n_max=20", |b| b.iter(|| assemble_spectrum(black_box(&p), 20, 1e-10)));
    let mut g = c.benchmark_group("oracles");
    g.sample_size(10);
    g.bench_function("shooting ground state", |b| {
        b.iter(|| shoot_eigenvalue(&p, (-2.0, -0.25), &ShootingConfig::default()))
    });
    let q = CoulombParams::new(-1.0, ExtendedReal::Infinite).unwrap();
    g.bench_function("fd three levels", |b| {
        b.iter(|| fd_extrapolated(&q, &FdConfig::for_levels(-1.0 / 36.0, 0), 3))
    });
    g.finish();
}

criterion_group!(benches, specfun, resolvent, spectra);
criterion_main!(benches);

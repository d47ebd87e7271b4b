use std::hint::black_box;

use biphoton_bench::{erfi_ray, reference_device, reference_geometry, reference_spectrum};
use biphoton_core::correlation::transform;
use biphoton_core::units::omega_from_wavelength;
use biphoton_core::{erfi, spectral_amplitude, tuning_curve, AngleConvention, TransformOptions, TuningQuantity};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_erfi(c: &mut Criterion) {
    let mut g = c.benchmark_group("erfi");
    for (label, r) in [("series", 5.5), ("continued_fraction", 20.0)] {
        let pts = erfi_ray(64, r);
        g.bench_function(label, |b| {
            b.iter(|| pts.iter().map(|z| erfi(black_box(*z)).unwrap().re).sum::<f64>())
        });
    }
    g.finish();
}

fn bench_amplitude(c: &mut Criterion) {
    let d = reference_device();
    let geom = reference_geometry();
    let w = omega_from_wavelength(1.2);
    c.bench_function("spectral_amplitude", |b| {
        b.iter(|| spectral_amplitude(&d, black_box(w), &geom, 1.0).unwrap())
    });
}

fn bench_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("symmetric_scan");
    g.sample_size(20);
    for n in [1usize << 12, 1 << 14] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| reference_spectrum(n))
        });
    }
    g.finish();
}

fn bench_transform(c: &mut Criterion) {
    let amp = reference_spectrum(1 << 14);
    let mut g = c.benchmark_group("transform");
    g.sample_size(20);
    let seedless = TransformOptions {
        spot_check_seed: None,
        ..TransformOptions::default()
    };
    g.bench_function("fft", |b| b.iter(|| transform(&amp, &seedless).unwrap()));
    g.bench_function("fft_with_spot_check", |b| {
        b.iter(|| transform(&amp, &TransformOptions::default()).unwrap())
    });
    g.finish();
}

fn bench_tuning(c: &mut Criterion) {
    let d = reference_device();
    let lam: Vec<f64> = (0..111).map(|i| 0.70 + 0.01 * i as f64).collect();
    let phi: Vec<f64> = (0..31).map(|j| -0.6 + 0.04 * j as f64).collect();
    let mut g = c.benchmark_group("tuning_curve");
    g.sample_size(20);
    g.bench_function("111x31", |b| {
        b.iter(|| tuning_curve(&d, &lam, &phi, AngleConvention::Symmetric, TuningQuantity::PhotonNumber).unwrap())
    });
    g.finish();
}

criterion_group!(
    kernels,
    bench_erfi,
    bench_amplitude,
    bench_scan,
    bench_transform,
    bench_tuning
);
criterion_main!(kernels);

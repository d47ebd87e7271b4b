//! Fixtures shared by the kernel benchmarks.

use biphoton_core::{symmetric_scan, Complex64, DeviceSpec, Geometry, MediaSet, QpmDevice, SpectralAmplitude};

pub fn reference_device() -> QpmDevice {
    DeviceSpec::reference_10pct()
        .build(&MediaSet::bundled())
        .expect("bundled device builds")
}

pub fn reference_geometry() -> Geometry {
    Geometry::noncollinear(0.25).expect("valid angle")
}

pub fn reference_spectrum(points: usize) -> SpectralAmplitude {
    symmetric_scan(&reference_device(), 0.70, points, &reference_geometry()).expect("scan succeeds")
}

/// Points on a ray at 45 degrees, where erfi is hardest, spread over `[0, r_max]`.
pub fn erfi_ray(n: usize, r_max: f64) -> Vec<Complex64> {
    (0..n)
        .map(|i| Complex64::from_polar(r_max * (i as f64 + 0.5) / n as f64, std::f64::consts::FRAC_PI_4))
        .collect()
}

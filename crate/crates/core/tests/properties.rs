use std::f64::consts::PI;

use biphoton_core::units::{omega_from_wavelength, wavelength_from_omega};
use biphoton_core::{
    apply_compensator, spectral_amplitude, symmetric_scan, Compensator, DeviceSpec, Geometry, MediaSet, QpmDevice,
};
use proptest::prelude::*;

fn device() -> QpmDevice {
    DeviceSpec::reference_10pct().build(&MediaSet::bundled()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn wavelength_round_trip(lambda in 0.4f64..4.0) {
        let back = wavelength_from_omega(omega_from_wavelength(lambda));
        prop_assert!((back / lambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatch_is_exchange_symmetric(lambda in 0.75f64..1.7, z in 0.0f64..20_000.0, phi in -0.6f64..0.6) {
        let d = device();
        let g = Geometry::noncollinear(phi).unwrap();
        let w = omega_from_wavelength(lambda);
        let a = d.phase_mismatch(w, z, &g).unwrap();
        let b = d.phase_mismatch(d.pump_omega() - w, z, &g).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * d.pump_wavevector());
    }

    #[test]
    fn mismatch_is_continuous(lambda in 0.75f64..1.7, z in 0.0f64..19_999.0) {
        let d = device();
        let g = Geometry::noncollinear(0.25).unwrap();
        let w = omega_from_wavelength(lambda);
        let a = d.phase_mismatch(w, z, &g).unwrap();
        let b = d.phase_mismatch(w + 1e-6, z, &g).unwrap();
        let c = d.phase_mismatch(w, z + 1.0, &g).unwrap();
        prop_assert!((a - b).abs() < 1e-5);
        prop_assert!((a - c - -d.chirp_rate).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn photon_number_modulus_is_exchange_symmetric(lambda in 0.78f64..1.62, phi in 0.0f64..0.45) {
        let d = device();
        let g = Geometry::noncollinear(phi).unwrap();
        let w = omega_from_wavelength(lambda);
        let a = spectral_amplitude(&d, w, &g, 1.0).unwrap().norm();
        let b = spectral_amplitude(&d, d.pump_omega() - w, &g, 1.0).unwrap().norm();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(b));
    }

    #[test]
    fn quadratic_filters_preserve_modulus(gdd in -2e4f64..2e4, wc in 1.6f64..2.0) {
        let d = device();
        let amp = symmetric_scan(&d, 0.8, 257, &Geometry::noncollinear(0.25).unwrap()).unwrap();
        let out = apply_compensator(&Compensator::Quadratic { gdd, omega_c: wc }, &amp).unwrap();
        for (x, y) in out.values.iter().zip(&amp.values) {
            prop_assert!((x.norm() - y.norm()).abs() <= 1e-12 * y.norm().max(1e-300));
        }
        let n_in: f64 = amp.values.iter().map(|v| v.norm_sqr()).sum();
        let n_out: f64 = out.values.iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((n_in - n_out).abs() <= 1e-12 * n_in);
    }
}

#[test]
fn grating_endpoint_round_trip_is_exact() {
    let d = device();
    let end = 2.0 * PI / d.grating_wavevector(d.length).unwrap();
    assert!((end / 8.825 - 1.0).abs() < 1e-10);
}

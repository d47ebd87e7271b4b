mod common;

use biphoton_core::biphoton::{erfi, erfi_continued_fraction, erfi_scaled, erfi_series};
use biphoton_core::Complex64;
use common::{erfi_oracle, rel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_in_disc(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> Complex64 {
    let r = rng.random_range(r_min..r_max);
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, t)
}

#[test]
fn oracle_reproduces_frozen_values() {
    let v = erfi_oracle(Complex64::new(1.0, 0.0));
    assert!((v.re - 1.650_425_758_797_542_9).abs() < 1e-16);
    let v = erfi_oracle(Complex64::new(2.0, -3.0));
    assert!(
        rel(
            v,
            Complex64::new(-0.000_011_546_724_379_290_603, -0.998_963_278_856_817_3)
        ) < 4e-16
    );
}

#[test]
fn series_region_within_1e12() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..600 {
        let z = random_in_disc(&mut rng, 0.0, 6.0);
        worst = worst.max(rel(erfi(z).unwrap(), erfi_oracle(z)));
    }
    assert!(worst <= 1e-12, "worst relative error {worst:e}");
}

#[test]
fn outer_region_within_1e9() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 150 {
        let z = random_in_disc(&mut rng, 6.0, 25.0);
        if (z * z).re > 600.0 {
            continue;
        }
        worst = worst.max(rel(erfi(z).unwrap(), erfi_oracle(z)));
        checked += 1;
    }
    assert!(worst <= 1e-9, "worst relative error {worst:e}");
}

#[test]
fn series_and_continued_fraction_agree_on_the_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..2000 {
        let z = random_in_disc(&mut rng, 5.5, 6.5);
        let (a, b) = (erfi_series(z), erfi_continued_fraction(z));
        assert!(rel(b, a) <= 1e-9, "{z}: {a} vs {b}");
    }
}

#[test]
fn odd_and_conjugate_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10_000 {
        let z = random_in_disc(&mut rng, 0.0, 20.0);
        if (z * z).re > 700.0 {
            continue;
        }
        let f = erfi(z).unwrap();
        if f.norm() == 0.0 {
            continue;
        }
        assert!(rel(erfi(-z).unwrap(), -f) <= 1e-11, "odd at {z}");
        assert!(rel(erfi(z.conj()).unwrap(), f.conj()) <= 1e-11, "conj at {z}");
    }
}

#[test]
fn scaled_form_against_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let z = random_in_disc(&mut rng, 0.0, 20.0);
        if (z * z).re > 600.0 {
            continue;
        }
        let want = erfi_oracle(z) * (-(z * z)).exp();
        assert!(rel(erfi_scaled(z), want) < 1e-9, "{z}");
    }
}

//! Unit conventions shared across the crate.
//!
//! Lengths are in micrometres, times in femtoseconds, angular frequencies in
//! rad/fs, wavevectors in rad/um and chirp rates in rad/um^2. Keeping every
//! quantity near unity keeps the chirped-amplitude exponents well scaled.

use std::f64::consts::PI;

/// Speed of light in vacuum [um/fs].
pub const C0: f64 = 0.299_792_458;

/// 1 rad/cm^2 expressed in rad/um^2.
pub const RAD_PER_CM2: f64 = 1e-8;

pub fn omega_from_wavelength(wavelength_um: f64) -> f64 {
    2.0 * PI * C0 / wavelength_um
}

pub fn wavelength_from_omega(omega: f64) -> f64 {
    2.0 * PI * C0 / omega
}

/// Angular frequency [rad/fs] to ordinary frequency [THz].
pub fn omega_to_thz(omega: f64) -> f64 {
    omega / (2.0 * PI) * 1e3
}

pub fn thz_to_omega(nu_thz: f64) -> f64 {
    nu_thz * 1e-3 * 2.0 * PI
}

pub fn nm_to_um(nm: f64) -> f64 {
    nm * 1e-3
}

pub fn um_to_nm(um: f64) -> f64 {
    um * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelength_round_trip() {
        for i in 0..=1000 {
            let lambda = 0.4 + 3.6 * i as f64 / 1000.0;
            let back = wavelength_from_omega(omega_from_wavelength(lambda));
            assert!(((back - lambda) / lambda).abs() < 1e-12, "{lambda} -> {back}");
        }
    }

    #[test]
    fn degenerate_frequency_of_green_pump() {
        // 1064 nm sits at ~281.76 THz.
        let nu = omega_to_thz(omega_from_wavelength(1.064));
        assert!((nu - 281.7598).abs() < 1e-3, "{nu}");
        assert!((thz_to_omega(nu) - omega_from_wavelength(1.064)).abs() < 1e-15);
    }
}

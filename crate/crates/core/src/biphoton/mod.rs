//! Two-photon spectral amplitude of a chirped QPM crystal, photon number and spectral phase.

mod dd;
mod erfi;

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

pub use erfi::{erfi, erfi_continued_fraction, erfi_scaled, erfi_series, SERIES_RADIUS};

use crate::device::{Geometry, QpmDevice};
use crate::error::{invalid, Error, Result};
use crate::grid::{outermost_crossings, trapezoid, unwrap_phase, UniformGrid};
use crate::units::{omega_from_wavelength, omega_to_thz, um_to_nm, wavelength_from_omega};

/// The factors of `psi(omega, L; phi)` before they are multiplied together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeParts {
    /// `-sqrt(i kappa^2 pi / 2 eta)`.
    pub prefactor: Complex64,
    /// `(k(omega) + k(omega_p - omega)) L` [rad].
    pub propagation_phase: f64,
    /// `-dk0^2 / 2 eta` [rad].
    pub chirp_phase: f64,
    /// `erfi(a) - erfi(b)`.
    pub bracket: Complex64,
    /// `dk(omega, 0; phi)` [rad/um].
    pub dk0: f64,
}

impl AmplitudeParts {
    pub fn value(&self) -> Complex64 {
        self.prefactor * Complex64::from_polar(1.0, self.propagation_phase + self.chirp_phase) * self.bracket
    }
}

pub fn amplitude_parts(device: &QpmDevice, omega: f64, geom: &Geometry, kappa: f64) -> Result<AmplitudeParts> {
    let eta = device.chirp_rate;
    if eta == 0.0 {
        return Err(Error::Unchirped);
    }
    let dk0 = device.phase_mismatch_at_input(omega, geom)?;
    let ks = device.wavevector(omega)?;
    let ki = device.wavevector(device.pump_omega() - omega)?;
    let i = Complex64::i();
    let prefactor = -(i * (kappa * kappa * PI / (2.0 * eta))).sqrt();
    let scale = (1.0 + i) / (2.0 * Complex64::new(eta, 0.0).sqrt());
    let bracket = erfi(scale * dk0)? - erfi(scale * (dk0 + eta * device.length))?;
    Ok(AmplitudeParts {
        prefactor,
        propagation_phase: (ks + ki) * device.length,
        chirp_phase: -dk0 * dk0 / (2.0 * eta),
        bracket,
        dk0,
    })
}

/// `psi(omega, L; phi)` for signal angular frequency `omega` [rad/fs].
pub fn spectral_amplitude(device: &QpmDevice, omega: f64, geom: &Geometry, kappa: f64) -> Result<Complex64> {
    Ok(amplitude_parts(device, omega, geom, kappa)?.value())
}

/// Spectral phase `(k(omega) + k(omega_p - omega)) L - dk(omega, 0)^2 / 2 eta` [rad].
pub fn spectral_phase(device: &QpmDevice, omega: f64, geom: &Geometry) -> Result<f64> {
    if device.chirp_rate == 0.0 {
        return Err(Error::Unchirped);
    }
    let dk0 = device.phase_mismatch_at_input(omega, geom)?;
    let ks = device.wavevector(omega)?;
    let ki = device.wavevector(device.pump_omega() - omega)?;
    Ok((ks + ki) * device.length - dk0 * dk0 / (2.0 * device.chirp_rate))
}

/// Three-point second difference of the spectral phase at `omega` [fs^2].
pub fn spectral_phase_gdd(device: &QpmDevice, omega: f64, geom: &Geometry, h: f64) -> Result<f64> {
    let m = spectral_phase(device, omega - h, geom)?;
    let c = spectral_phase(device, omega, geom)?;
    let p = spectral_phase(device, omega + h, geom)?;
    Ok((p - 2.0 * c + m) / (h * h))
}

/// Sampled, unwrapped phase curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPhaseCurve {
    pub omega: Vec<f64>,
    pub phase: Vec<f64>,
}

impl SpectralPhaseCurve {
    /// Unwraps `wrapped` (any branch) sampled at `omega`.
    pub fn from_wrapped(omega: Vec<f64>, wrapped: &[f64]) -> Result<Self> {
        if omega.len() != wrapped.len() {
            return Err(Error::ShapeMismatch(omega.len(), wrapped.len()));
        }
        Ok(SpectralPhaseCurve {
            omega,
            phase: unwrap_phase(wrapped),
        })
    }

    pub fn write_csv<W: Write>(&self, out: W, comments: &[String]) -> Result<()> {
        write_table(
            out,
            comments,
            &["omega_rad_per_fs", "phase_rad"],
            self.omega.iter().zip(&self.phase).map(|(w, p)| vec![*w, *p]),
        )
    }
}

/// Evaluates the spectral phase on `omega` and unwraps it.
pub fn spectral_phase_curve(device: &QpmDevice, omega: &[f64], geom: &Geometry) -> Result<SpectralPhaseCurve> {
    let wrapped = omega
        .par_iter()
        .map(|&w| spectral_phase(device, w, geom).map(|p| p.sin().atan2(p.cos())))
        .collect::<Result<Vec<_>>>()?;
    SpectralPhaseCurve::from_wrapped(omega.to_vec(), &wrapped)
}

/// `psi` sampled on a uniform, increasing angular-frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralAmplitude {
    pub grid: UniformGrid,
    pub omega: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Points where the amplitude is undefined; their value is zero.
    pub flagged: Vec<bool>,
    pub geometry: Geometry,
    pub device_tag: String,
    pub kappa: f64,
    pub pump_omega: f64,
}

impl SpectralAmplitude {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.grid.step
    }

    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|f| **f).count()
    }

    /// Same amplitude with a new overall scale.
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        let ratio = kappa / self.kappa;
        self.values.iter_mut().for_each(|v| *v *= ratio);
        self.kappa = kappa;
        self
    }

    /// Copy with `values` replaced, grid and tags kept.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::ShapeMismatch(self.len(), values.len()));
        }
        Ok(SpectralAmplitude { values, ..self.clone() })
    }

    pub fn wavelength_nm(&self) -> Vec<f64> {
        self.omega.iter().map(|&w| um_to_nm(wavelength_from_omega(w))).collect()
    }

    /// Unwrapped `arg psi`.
    pub fn phase_curve(&self) -> SpectralPhaseCurve {
        let wrapped: Vec<f64> = self.values.iter().map(|v| v.arg()).collect();
        SpectralPhaseCurve {
            omega: self.omega.clone(),
            phase: unwrap_phase(&wrapped),
        }
    }

    /// `sum |psi|^2 / 2 pi d omega`, trapezoid rule.
    pub fn integrated_photon_number(&self) -> f64 {
        trapezoid(self.step(), &mean_photon_number(self))
    }

    /// Columns: omega, wavelength [nm], Re psi, Im psi, |psi|^2/2pi, unwrapped phase.
    pub fn write_csv<W: Write>(&self, out: W, comments: &[String]) -> Result<()> {
        let lam = self.wavelength_nm();
        let n = mean_photon_number(self);
        let phase = self.phase_curve().phase;
        write_table(
            out,
            comments,
            &[
                "omega_rad_per_fs",
                "wavelength_nm",
                "re_psi",
                "im_psi",
                "photon_number",
                "phase_rad",
            ],
            (0..self.len()).map(|i| {
                vec![
                    self.omega[i],
                    lam[i],
                    self.values[i].re,
                    self.values[i].im,
                    n[i],
                    phase[i],
                ]
            }),
        )
    }
}

pub(crate) fn write_table<W: Write>(
    mut out: W,
    comments: &[String],
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<()> {
    let io = |e: std::io::Error| Error::Parse(format!("write failed: {e}"));
    for c in comments {
        writeln!(out, "# {c}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

/// `|psi|^2 / 2 pi` pointwise.
pub fn mean_photon_number(amp: &SpectralAmplitude) -> Vec<f64> {
    amp.values.iter().map(|v| v.norm_sqr() / (2.0 * PI)).collect()
}

/// Samples `psi` on an explicit uniform angular-frequency grid.
pub fn scan_omega(device: &QpmDevice, grid: UniformGrid, geom: &Geometry, kappa: f64) -> Result<SpectralAmplitude> {
    geom.validate()?;
    if device.chirp_rate == 0.0 {
        return Err(Error::Unchirped);
    }
    let omega = grid.points();
    let evaluated: Vec<Option<Complex64>> = omega
        .par_iter()
        .map(|&w| spectral_amplitude(device, w, geom, kappa).ok())
        .collect();
    let flagged: Vec<bool> = evaluated.iter().map(Option::is_none).collect();
    let values = evaluated.into_iter().map(|v| v.unwrap_or_default()).collect();
    let amp = SpectralAmplitude {
        grid,
        omega,
        values,
        flagged,
        geometry: *geom,
        device_tag: device.tag.clone(),
        kappa,
        pump_omega: device.pump_omega(),
    };
    if amp.flagged_count() > 0 {
        log::warn!(
            "{} of {} spectral points are outside the physical domain",
            amp.flagged_count(),
            amp.len()
        );
    }
    Ok(amp)
}

/// Samples `psi` on `n_points` angular frequencies between `omega(lambda_max)` and `omega(lambda_min)`.
pub fn spectrum_scan(
    device: &QpmDevice,
    lambda_min: f64,
    lambda_max: f64,
    n_points: usize,
    geom: &Geometry,
) -> Result<SpectralAmplitude> {
    if !(lambda_min > 0.0 && lambda_max > lambda_min) {
        return Err(invalid(
            "lambda_min",
            format!("band [{lambda_min}, {lambda_max}] um is empty"),
        ));
    }
    if n_points < 2 {
        return Err(invalid("n_points", format!("{n_points} < 2")));
    }
    let grid = UniformGrid::spanning(
        omega_from_wavelength(lambda_max),
        omega_from_wavelength(lambda_min),
        n_points,
    )?;
    scan_omega(device, grid, geom, 1.0)
}

/// Grid of `n_points` centred on the degenerate frequency and reaching `omega(lambda_min)`.
/// Every point's partner `omega_p - omega` is also on the grid.
pub fn symmetric_scan(
    device: &QpmDevice,
    lambda_min: f64,
    n_points: usize,
    geom: &Geometry,
) -> Result<SpectralAmplitude> {
    let center = device.degenerate_omega();
    let half = omega_from_wavelength(lambda_min) - center;
    if !(half > 0.0) || n_points < 2 {
        return Err(invalid(
            "lambda_min",
            format!("{lambda_min} um must lie above the degenerate frequency"),
        ));
    }
    let grid = UniformGrid::spanning(center - half, center + half, n_points)?;
    scan_omega(device, grid, geom, 1.0)
}

/// Outermost crossings of `fraction` of the peak photon number, as wavelengths [nm], short edge first.
pub fn band_edges(amp: &SpectralAmplitude, fraction: f64) -> Result<(f64, f64)> {
    let (w_lo, w_hi) = omega_crossings(amp, fraction)?;
    Ok((
        um_to_nm(wavelength_from_omega(w_hi)),
        um_to_nm(wavelength_from_omega(w_lo)),
    ))
}

/// Frequency span between the outermost `fraction`-of-peak crossings [THz].
pub fn bandwidth_thz(amp: &SpectralAmplitude, fraction: f64) -> Result<f64> {
    let (w_lo, w_hi) = omega_crossings(amp, fraction)?;
    Ok(omega_to_thz(w_hi - w_lo))
}

fn omega_crossings(amp: &SpectralAmplitude, fraction: f64) -> Result<(f64, f64)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(invalid("fraction", format!("{fraction} must lie in (0, 1)")));
    }
    let n = mean_photon_number(amp);
    let peak = n.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Grid("spectrum is identically zero".into()));
    }
    outermost_crossings(&amp.omega, &n, fraction * peak)?.ok_or_else(|| Error::Grid("no threshold crossing".into()))
}

//! Detection-chain forward model: angular acceptance, bandpass resolution and detector efficiency.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biphoton::{spectral_amplitude, write_table};
use crate::device::{AngleConvention, Geometry, QpmDevice};
use crate::error::{invalid, Error, Result};
use crate::grid::simpson;
use crate::units::{nm_to_um, omega_from_wavelength, C0};

pub const DEFAULT_ANGLE_SAMPLES: usize = 33;

/// Range of external emission angles collected by the detection optics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptanceWindow {
    pub phi_min_deg: f64,
    pub phi_max_deg: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    DEFAULT_ANGLE_SAMPLES
}

impl AcceptanceWindow {
    pub fn new(phi_min_deg: f64, phi_max_deg: f64, samples: usize) -> Result<Self> {
        let w = AcceptanceWindow {
            phi_min_deg,
            phi_max_deg,
            samples,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi_min_deg < self.phi_max_deg) {
            return Err(invalid(
                "phi_min_deg",
                format!("{} must be below phi_max_deg {}", self.phi_min_deg, self.phi_max_deg),
            ));
        }
        if self.samples < 3 {
            return Err(invalid("samples", format!("{} < 3", self.samples)));
        }
        if self.phi_min_deg.abs() >= 90.0 || self.phi_max_deg.abs() >= 90.0 {
            return Err(invalid("phi_max_deg", "angles must satisfy |phi| < 90 deg"));
        }
        Ok(())
    }

    pub fn angles(&self) -> Vec<f64> {
        let h = (self.phi_max_deg - self.phi_min_deg) / (self.samples - 1) as f64;
        (0..self.samples).map(|i| self.phi_min_deg + h * i as f64).collect()
    }

    fn step_rad(&self) -> f64 {
        ((self.phi_max_deg - self.phi_min_deg) / (self.samples - 1) as f64).to_radians()
    }
}

/// Bandpass width of the scanning filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum Resolution {
    Constant {
        width_nm: f64,
    },
    /// `below_nm` up to `split_nm`, `above_nm` beyond.
    Split {
        below_nm: f64,
        above_nm: f64,
        split_nm: f64,
    },
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::Constant { width_nm: 5.0 }
    }
}

impl Resolution {
    pub fn split_default() -> Self {
        Resolution::Split {
            below_nm: 4.0,
            above_nm: 6.0,
            split_nm: 1100.0,
        }
    }

    pub fn width_nm(&self, lambda_nm: f64) -> f64 {
        match *self {
            Resolution::Constant { width_nm } => width_nm,
            Resolution::Split {
                below_nm,
                above_nm,
                split_nm,
            } => {
                if lambda_nm < split_nm {
                    below_nm
                } else {
                    above_nm
                }
            }
        }
    }

    /// `d omega = 2 pi c0 d lambda / lambda^2` [rad/fs].
    pub fn omega_width(&self, lambda_nm: f64) -> f64 {
        let l = nm_to_um(lambda_nm);
        2.0 * PI * C0 * nm_to_um(self.width_nm(lambda_nm)) / (l * l)
    }
}

/// Detected spectrum on a wavelength grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectedSpectrum {
    pub lambda_nm: Vec<f64>,
    /// Scaled to unit peak; flagged wavelengths hold zero.
    pub values: Vec<f64>,
    /// Before normalisation.
    pub raw: Vec<f64>,
    pub flagged: Vec<bool>,
}

impl DetectedSpectrum {
    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|f| **f).count()
    }

    /// Outermost wavelengths [nm] where the spectrum reaches `fraction` of its peak.
    pub fn support(&self, fraction: f64) -> Result<(f64, f64)> {
        crate::grid::outermost_crossings(&self.lambda_nm, &self.values, fraction)?
            .ok_or_else(|| Error::Grid("spectrum never reaches the threshold".into()))
    }

    pub fn write_csv<W: Write>(&self, out: W, comments: &[String], counts: Option<&[f64]>) -> Result<()> {
        let mut header = vec!["wavelength_nm", "s_normalized"];
        if let Some(c) = counts {
            if c.len() != self.values.len() {
                return Err(Error::ShapeMismatch(self.values.len(), c.len()));
            }
            header.push("raw_count_model");
        }
        write_table(
            out,
            comments,
            &header,
            (0..self.values.len()).map(|i| {
                let mut row = vec![self.lambda_nm[i], self.values[i]];
                if let Some(c) = counts {
                    row.push(c[i]);
                }
                row
            }),
        )
    }
}

/// `S(lambda) ~ d omega(lambda) int |psi(omega, L; phi)|^2 d phi`, composite Simpson over `phi` [rad].
pub fn detected_spectrum(
    device: &QpmDevice,
    window: &AcceptanceWindow,
    lambda_nm: &[f64],
    resolution: &Resolution,
    convention: AngleConvention,
    kappa: f64,
) -> Result<DetectedSpectrum> {
    window.validate()?;
    if lambda_nm.is_empty() {
        return Err(Error::Grid("empty wavelength grid".into()));
    }
    let angles = window.angles();
    let cells: Vec<Option<f64>> = lambda_nm
        .par_iter()
        .map(|&lam| {
            let omega = omega_from_wavelength(nm_to_um(lam));
            let integrand: Option<Vec<f64>> = angles
                .iter()
                .map(|&phi| {
                    spectral_amplitude(
                        device,
                        omega,
                        &Geometry {
                            phi_deg: phi,
                            convention,
                        },
                        kappa,
                    )
                    .ok()
                    .map(|psi| psi.norm_sqr())
                })
                .collect();
            integrand.map(|y| resolution.omega_width(lam) * simpson(window.step_rad(), &y))
        })
        .collect();
    let flagged: Vec<bool> = cells.iter().map(Option::is_none).collect();
    let raw: Vec<f64> = cells.into_iter().map(|c| c.unwrap_or(0.0)).collect();
    let n_flagged = flagged.iter().filter(|f| **f).count();
    if n_flagged > 0 {
        log::warn!(
            "{n_flagged} of {} wavelengths excluded from the detected spectrum",
            lambda_nm.len()
        );
    }
    let peak = raw.iter().cloned().fold(0.0, f64::max);
    let values = raw.iter().map(|v| if peak > 0.0 { v / peak } else { 0.0 }).collect();
    Ok(DetectedSpectrum {
        lambda_nm: lambda_nm.to_vec(),
        values,
        raw,
        flagged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Linear in `ln(efficiency)`.
    #[default]
    LogLinear,
    Linear,
}

/// Tabulated detector quantum efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    pub name: String,
    /// `(wavelength nm, efficiency)`, strictly increasing in wavelength.
    pub points: Vec<(f64, f64)>,
    pub interpolation: Interpolation,
    /// Continue the end segments beyond the table instead of failing.
    pub extrapolate: bool,
}

#[derive(Debug, Deserialize)]
struct Row {
    wavelength_nm: f64,
    efficiency: f64,
}

impl DetectorModel {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>, interpolation: Interpolation) -> Result<Self> {
        if points.len() < 2 {
            return Err(invalid("efficiency_points", "need at least two points"));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(invalid(
                    "efficiency_points",
                    format!("wavelengths not increasing at {} nm", w[1].0),
                ));
            }
        }
        if let Some(p) = points.iter().find(|p| !(p.1 > 0.0 && p.1 <= 1.0)) {
            return Err(invalid(
                "efficiency_points",
                format!("efficiency {} at {} nm is outside (0, 1]", p.1, p.0),
            ));
        }
        Ok(DetectorModel {
            name: name.into(),
            points,
            interpolation,
            extrapolate: false,
        })
    }

    /// Reads a `wavelength_nm,efficiency` table; `#` lines are comments.
    pub fn from_csv<R: Read>(name: impl Into<String>, reader: R, interpolation: Interpolation) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let points = rdr
            .deserialize::<Row>()
            .map(|r| r.map(|r| (r.wavelength_nm, r.efficiency)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        DetectorModel::new(name, points, interpolation)
    }

    /// Superconducting nanowire detector, efficiency falling from 30.7 % at 600 nm to 1.1 % at 1550 nm.
    pub fn snspd() -> Self {
        DetectorModel::from_csv(
            "snspd",
            include_str!("../data/detectors/snspd.csv").as_bytes(),
            Interpolation::LogLinear,
        )
        .expect("bundled table is valid")
    }

    /// Near-infrared photomultiplier with flat relative response.
    pub fn pmt() -> Self {
        DetectorModel::from_csv(
            "pmt",
            include_str!("../data/detectors/pmt.csv").as_bytes(),
            Interpolation::LogLinear,
        )
        .expect("bundled table is valid")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "snspd" => Ok(Self::snspd()),
            "pmt" => Ok(Self::pmt()),
            _ => Err(invalid("detector", format!("unknown built-in detector `{name}`"))),
        }
    }

    pub fn with_extrapolation(mut self, on: bool) -> Self {
        self.extrapolate = on;
        self
    }

    pub fn efficiency(&self, lambda_nm: f64) -> Result<f64> {
        let p = &self.points;
        let (lo, hi) = (p[0].0, p[p.len() - 1].0);
        if !(lambda_nm >= lo && lambda_nm <= hi) && !self.extrapolate {
            return Err(invalid(
                "wavelength",
                format!("{lambda_nm} nm is outside the `{}` table [{lo}, {hi}] nm", self.name),
            ));
        }
        let k = p.partition_point(|q| q.0 <= lambda_nm).clamp(1, p.len() - 1);
        let ((x0, y0), (x1, y1)) = (p[k - 1], p[k]);
        let t = (lambda_nm - x0) / (x1 - x0);
        Ok(match self.interpolation {
            Interpolation::LogLinear => (y0.ln() + t * (y1.ln() - y0.ln())).exp(),
            Interpolation::Linear => y0 + t * (y1 - y0),
        })
    }
}

/// `spectrum * efficiency(lambda) * coupling`.
pub fn raw_counts_model(lambda_nm: &[f64], spectrum: &[f64], det: &DetectorModel, coupling: f64) -> Result<Vec<f64>> {
    if lambda_nm.len() != spectrum.len() {
        return Err(Error::ShapeMismatch(lambda_nm.len(), spectrum.len()));
    }
    if !(0.0..=1.0).contains(&coupling) {
        return Err(invalid("coupling", format!("{coupling} is outside [0, 1]")));
    }
    lambda_nm
        .iter()
        .zip(spectrum)
        .map(|(&l, &s)| Ok(s * det.efficiency(l)? * coupling))
        .collect()
}

//! Spectral-phase filters `H(omega)` and group-delay-dispersion measurement.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::biphoton::{SpectralAmplitude, SpectralPhaseCurve};
use crate::dispersion::{MediaSet, Medium};
use crate::error::{invalid, Error, Result};
use crate::units::{omega_from_wavelength, wavelength_from_omega, C0};

/// A pure-phase transfer function.
#[derive(Debug, Clone, PartialEq)]
pub enum Compensator {
    Identity,
    /// `H = exp(-i arg psi_ref)`, flattening the reference phase.
    Perfect {
        reference: SpectralAmplitude,
    },
    /// `H = exp(i gdd (omega - omega_c)^2 / 2)`.
    Quadratic {
        gdd: f64,
        omega_c: f64,
    },
    PrismPair(PrismPair),
}

impl Compensator {
    pub fn name(&self) -> &'static str {
        match self {
            Compensator::Identity => "identity",
            Compensator::Perfect { .. } => "perfect",
            Compensator::Quadratic { .. } => "quadratic",
            Compensator::PrismPair(_) => "prism_pair",
        }
    }

    /// Phase added at `omega` [rad]. The perfect model is only defined on its reference grid.
    pub fn phase(&self, omega: f64) -> Result<f64> {
        match self {
            Compensator::Identity => Ok(0.0),
            Compensator::Perfect { reference } => {
                let i = reference
                    .omega
                    .iter()
                    .position(|&w| (w - omega).abs() <= 1e-12 * omega.abs())
                    .ok_or(Error::GridMismatch)?;
                Ok(-reference.values[i].arg())
            }
            Compensator::Quadratic { gdd, omega_c } => Ok(0.5 * gdd * (omega - omega_c).powi(2)),
            Compensator::PrismPair(p) => p.phase(omega),
        }
    }

    pub fn transfer(&self, omega: f64) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, self.phase(omega)?))
    }
}

/// Fixed delay `G = exp(i omega tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayElement {
    /// fs.
    pub tau: f64,
}

impl DelayElement {
    pub fn transfer(&self, omega: f64) -> Complex64 {
        Complex64::from_polar(1.0, omega * self.tau)
    }

    pub fn apply(&self, amp: &SpectralAmplitude) -> Result<SpectralAmplitude> {
        amp.with_values(
            amp.omega
                .iter()
                .zip(&amp.values)
                .map(|(&w, v)| v * self.transfer(w))
                .collect(),
        )
    }
}

/// Pointwise `H(omega) psi(omega)`.
pub fn apply_compensator(comp: &Compensator, amp: &SpectralAmplitude) -> Result<SpectralAmplitude> {
    let values = match comp {
        Compensator::Identity => amp.values.clone(),
        Compensator::Perfect { reference } => {
            if reference.len() != amp.len()
                || reference
                    .omega
                    .iter()
                    .zip(&amp.omega)
                    .any(|(a, b)| (a - b).abs() > 1e-12 * b.abs())
            {
                return Err(Error::GridMismatch);
            }
            reference
                .values
                .iter()
                .zip(&amp.values)
                .map(|(r, v)| v * Complex64::from_polar(1.0, -r.arg()))
                .collect()
        }
        _ => amp
            .omega
            .iter()
            .zip(&amp.values)
            .map(|(&w, v)| comp.transfer(w).map(|h| v * h))
            .collect::<Result<Vec<_>>>()?,
    };
    amp.with_values(values)
}

/// Two identical prisms cut for Brewster incidence, traversed `passes` times.
#[derive(Debug, Clone, PartialEq)]
pub struct PrismPair {
    pub glass: Medium,
    /// Apex-to-apex separation [um].
    pub separation: f64,
    /// Apex angle [rad].
    pub apex_angle: f64,
    /// Extra glass path per pass [um].
    pub insertion: f64,
    pub passes: u32,
    pub temperature: f64,
    incidence: f64,
    exit_design: f64,
}

impl PrismPair {
    /// Brewster-cut pair for `design_wavelength` [um]. `apex_angle` overrides the Brewster apex.
    pub fn new(
        glass: Medium,
        separation: f64,
        design_wavelength: f64,
        apex_angle: Option<f64>,
        insertion: f64,
        passes: u32,
    ) -> Result<Self> {
        if !(separation >= 0.0 && separation.is_finite()) {
            return Err(invalid("separation", format!("{separation} must be nonnegative")));
        }
        if !(insertion >= 0.0) {
            return Err(invalid("insertion", format!("{insertion} must be nonnegative")));
        }
        if passes == 0 {
            return Err(invalid("passes", "must be at least 1"));
        }
        let temperature = glass.reference_temperature;
        let n = glass.refractive_index(design_wavelength, temperature)?;
        let incidence = n.atan();
        let apex_angle = apex_angle.unwrap_or(std::f64::consts::PI - 2.0 * incidence);
        if !(apex_angle > 0.0 && apex_angle < std::f64::consts::FRAC_PI_2 * 1.5) {
            return Err(invalid(
                "apex_angle",
                format!("{apex_angle} rad is not a usable prism apex"),
            ));
        }
        let mut pair = PrismPair {
            glass,
            separation,
            apex_angle,
            insertion,
            passes,
            temperature,
            incidence,
            exit_design: 0.0,
        };
        pair.exit_design = pair.exit_angle(omega_from_wavelength(design_wavelength))?;
        Ok(pair)
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        if !(separation >= 0.0 && separation.is_finite()) {
            return Err(invalid("separation", format!("{separation} must be nonnegative")));
        }
        Ok(PrismPair {
            separation,
            ..self.clone()
        })
    }

    fn exit_angle(&self, omega: f64) -> Result<f64> {
        let n = self
            .glass
            .refractive_index(wavelength_from_omega(omega), self.temperature)?;
        let inside = (self.incidence.sin() / n).asin();
        let back = self.apex_angle - inside;
        let s = n * back.sin();
        if !(s.abs() < 1.0) {
            return Err(Error::Domain {
                quantity: "prism exit face",
                detail: format!("total internal reflection at omega = {omega} rad/fs"),
            });
        }
        Ok(s.asin())
    }

    /// `passes (omega / c0) (l cos beta + n insertion)` [rad].
    pub fn phase(&self, omega: f64) -> Result<f64> {
        let beta = self.exit_angle(omega)? - self.exit_design;
        let n = self
            .glass
            .refractive_index(wavelength_from_omega(omega), self.temperature)?;
        Ok(self.passes as f64 * omega / C0 * (self.separation * beta.cos() + n * self.insertion))
    }

    /// Second derivative of the phase at `omega` [fs^2].
    pub fn gdd(&self, omega: f64) -> Result<f64> {
        let h = 2e-3 * omega.max(1e-3);
        let f = |k: f64| self.phase(omega + k * h);
        Ok((-f(2.0)? + 16.0 * f(1.0)? - 30.0 * f(0.0)? + 16.0 * f(-1.0)? - f(-2.0)?) / (12.0 * h * h))
    }

    /// Separation [um] at which the pair's GDD at `omega` equals `-target_gdd`.
    pub fn separation_for_gdd(&self, target_gdd: f64, omega: f64) -> Result<f64> {
        let base = self.with_separation(0.0)?.gdd(omega)?;
        let per_um = self.with_separation(1e3)?.gdd(omega)? / 1e3 - base / 1e3;
        let l = -(target_gdd + base) / per_um;
        if !(l >= 0.0 && l.is_finite()) {
            return Err(invalid(
                "separation",
                format!("a GDD of {:.1} fs^2 cannot be cancelled by this pair", target_gdd),
            ));
        }
        Ok(l)
    }
}

pub fn prism_pair_phase(pair: &PrismPair, omega: f64) -> Result<f64> {
    pair.phase(omega)
}

/// Five-point second derivative of `curve` at `omega_c` [fs^2]. Off-grid centres are
/// linearly interpolated between the stencils of the two bracketing points.
pub fn measure_gdd(curve: &SpectralPhaseCurve, omega_c: f64) -> Result<f64> {
    let w = &curve.omega;
    let n = w.len();
    if n < 5 {
        return Err(Error::Grid("need at least five phase samples".into()));
    }
    let h = (w[n - 1] - w[0]) / (n - 1) as f64;
    let pos = (omega_c - w[0]) / h;
    let edge = || {
        Error::Grid(format!(
            "omega_c = {omega_c} rad/fs has fewer than two neighbours on one side"
        ))
    };
    if !(pos >= 2.0 - 1e-9 && pos <= (n - 3) as f64 + 1e-9) {
        return Err(edge());
    }
    let stencil = |i: usize| {
        let p = &curve.phase;
        (-p[i + 2] + 16.0 * p[i + 1] - 30.0 * p[i] + 16.0 * p[i - 1] - p[i - 2]) / (12.0 * h * h)
    };
    let i = pos.round();
    if (pos - i).abs() < 1e-9 {
        return Ok(stencil(i as usize));
    }
    let i0 = pos.floor() as usize;
    let t = pos - i0 as f64;
    Ok((1.0 - t) * stencil(i0) + t * stencil(i0 + 1))
}

/// Compensator description as found in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum CompensatorSpec {
    Identity,
    Perfect,
    /// Omitted `gdd_fs2` means "cancel the device GDD".
    Quadratic {
        #[serde(default)]
        gdd_fs2: Option<f64>,
        #[serde(default)]
        center_wavelength_um: Option<f64>,
    },
    /// Omitted `separation_mm` means "tune to cancel the device GDD".
    PrismPair {
        #[serde(default = "default_glass")]
        glass: String,
        #[serde(default)]
        separation_mm: Option<f64>,
        #[serde(default)]
        apex_angle_rad: Option<f64>,
        #[serde(default)]
        design_wavelength_um: Option<f64>,
        #[serde(default)]
        insertion_mm: f64,
        #[serde(default = "default_passes")]
        passes: u32,
    },
}

fn default_glass() -> String {
    "SF14".into()
}

fn default_passes() -> u32 {
    2
}

impl CompensatorSpec {
    /// Builds the filter for `amp`, whose device has GDD `device_gdd` [fs^2] at `omega_c`.
    pub fn build(
        &self,
        media: &MediaSet,
        amp: &SpectralAmplitude,
        omega_c: f64,
        device_gdd: f64,
    ) -> Result<Compensator> {
        Ok(match self {
            CompensatorSpec::Identity => Compensator::Identity,
            CompensatorSpec::Perfect => Compensator::Perfect { reference: amp.clone() },
            CompensatorSpec::Quadratic {
                gdd_fs2,
                center_wavelength_um,
            } => Compensator::Quadratic {
                gdd: gdd_fs2.unwrap_or(-device_gdd),
                omega_c: center_wavelength_um.map(omega_from_wavelength).unwrap_or(omega_c),
            },
            CompensatorSpec::PrismPair {
                glass,
                separation_mm,
                apex_angle_rad,
                design_wavelength_um,
                insertion_mm,
                passes,
            } => {
                let glass = media.get(glass)?.clone();
                let design = design_wavelength_um.unwrap_or_else(|| wavelength_from_omega(omega_c));
                let pair = PrismPair::new(glass, 0.0, design, *apex_angle_rad, insertion_mm * 1e3, *passes)?;
                let l = match separation_mm {
                    Some(mm) => mm * 1e3,
                    None => pair.separation_for_gdd(device_gdd, omega_c)?,
                };
                Compensator::PrismPair(pair.with_separation(l)?)
            }
        })
    }
}

/// The bundled N-SF14 pair at 1064 nm with the given separation [mm].
pub fn sf14_pair(separation_mm: f64, passes: u32) -> Result<PrismPair> {
    let glass = MediaSet::bundled().get("SF14")?.clone();
    PrismPair::new(glass, separation_mm * 1e3, 1.064, None, 0.0, passes)
}

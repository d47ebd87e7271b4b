//! Scenario file schema.

use std::collections::BTreeSet;
use std::path::PathBuf;

use biphoton_core::instrument::DEFAULT_ANGLE_SAMPLES;
use biphoton_core::{
    AngleConvention, CompensatorSpec, DeviceSpec, Geometry, Interpolation, Resolution, TuningQuantity, WidthMode,
};
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub const DEFAULT_POINTS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    TuningCurve,
    Spectrum,
    DetectedSpectrum,
    SpectralPhase,
    SfgTrace,
    Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: String,
    pub outputs: BTreeSet<Output>,
    /// Extra media document, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub media_file: Option<PathBuf>,
    #[serde(default)]
    pub device: Option<DeviceSpec>,
    #[serde(default)]
    pub geometry: GeometrySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<BandSpec>,
    #[serde(default, rename = "compensator", skip_serializing_if = "Vec::is_empty")]
    pub compensators: Vec<CompensatorSpec>,
    #[serde(default)]
    pub correlation: CorrelationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuning_curve: Option<TuningSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instrument: Option<InstrumentSpec>,
    #[serde(default)]
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    #[serde(default)]
    pub phi_deg: f64,
    #[serde(default)]
    pub convention: AngleConvention,
}

impl Default for GeometrySpec {
    fn default() -> Self {
        GeometrySpec {
            phi_deg: 0.0,
            convention: AngleConvention::Symmetric,
        }
    }
}

impl GeometrySpec {
    pub fn geometry(&self) -> Geometry {
        Geometry {
            phi_deg: self.phi_deg,
            convention: self.convention,
        }
    }
}

/// Spectral band. Without `lambda_max_um` the grid is centred on the degenerate frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandSpec {
    pub lambda_min_um: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max_um: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    /// GDD evaluation wavelength; defaults to twice the pump wavelength.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gdd_wavelength_um: Option<f64>,
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Noncollinear,
    Collinear,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSpec {
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "default_zero_pad")]
    pub zero_pad: usize,
    #[serde(default)]
    pub width_mode: WidthMode,
    /// Only delays with `|tau|` up to this value are written [fs].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_window_fs: Option<f64>,
}

fn default_zero_pad() -> usize {
    biphoton_core::correlation::DEFAULT_ZERO_PAD
}

impl Default for CorrelationSpec {
    fn default() -> Self {
        CorrelationSpec {
            scheme: Scheme::Noncollinear,
            zero_pad: default_zero_pad(),
            width_mode: WidthMode::Outermost,
            trace_window_fs: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuningSpec {
    pub lambda_min_um: f64,
    pub lambda_max_um: f64,
    pub lambda_points: usize,
    pub phi_min_deg: f64,
    pub phi_max_deg: f64,
    pub phi_points: usize,
    #[serde(default)]
    pub quantity: TuningQuantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstrumentSpec {
    pub phi_min_deg: f64,
    pub phi_max_deg: f64,
    #[serde(default = "default_angle_samples")]
    pub angle_samples: usize,
    pub lambda_min_nm: f64,
    pub lambda_max_nm: f64,
    #[serde(default = "default_step")]
    pub step_nm: f64,
    #[serde(default)]
    pub resolution: Resolution,
    /// Built-in detector name (`snspd`, `pmt`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<String>,
    /// Detector table, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector_file: Option<PathBuf>,
    #[serde(default)]
    pub interpolation: Interpolation,
    #[serde(default)]
    pub extrapolate: bool,
    #[serde(default = "default_coupling")]
    pub coupling: f64,
}

fn default_angle_samples() -> usize {
    DEFAULT_ANGLE_SAMPLES
}

fn default_step() -> f64 {
    1.0
}

fn default_coupling() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "default_edge")]
    pub edge_fraction: f64,
    #[serde(default = "default_bandwidth")]
    pub bandwidth_fraction: f64,
}

fn default_edge() -> f64 {
    0.01
}

fn default_bandwidth() -> f64 {
    0.5
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            edge_fraction: default_edge(),
            bandwidth_fraction: default_bandwidth(),
        }
    }
}

impl Scenario {
    /// Parses and checks cross-section consistency.
    pub fn from_toml_str(doc: &str) -> CliResult<Self> {
        let s: Scenario = toml::from_str(doc)?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> CliResult<()> {
        let schema = |m: &str| Err(CliError::Schema(m.to_string()));
        if self.device.is_none() {
            return schema("missing [device] section");
        }
        if self.outputs.is_empty() {
            return schema("`outputs` is empty");
        }
        let needs_band = [Output::Spectrum, Output::SpectralPhase, Output::SfgTrace];
        if self.band.is_none() && needs_band.iter().any(|o| self.outputs.contains(o)) {
            return schema("spectrum, spectral_phase and sfg_trace outputs need a [band] section");
        }
        if self.outputs.contains(&Output::SfgTrace) && self.compensators.is_empty() {
            return schema("sfg_trace output needs at least one [[compensator]]");
        }
        if self.outputs.contains(&Output::TuningCurve) && self.tuning_curve.is_none() {
            return schema("tuning_curve output needs a [tuning_curve] section");
        }
        if self.outputs.contains(&Output::DetectedSpectrum) && self.instrument.is_none() {
            return schema("detected_spectrum output needs an [instrument] section");
        }
        if let Some(b) = &self.band {
            if b.points < 2 {
                return schema("band.points must be at least 2");
            }
        }
        if let Some(i) = &self.instrument {
            if i.detector.is_some() && i.detector_file.is_some() {
                return schema("give either instrument.detector or instrument.detector_file, not both");
            }
            if i.step_nm.is_nan() || i.step_nm <= 0.0 {
                return schema("instrument.step_nm must be positive");
            }
        }
        if let Some(t) = &self.tuning_curve {
            if t.lambda_points == 0 || t.phi_points == 0 {
                return schema("tuning_curve grids need at least one point");
            }
        }
        Ok(())
    }

    /// The scenario as TOML, for echoing into output headers.
    pub fn echo(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }
}

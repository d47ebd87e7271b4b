//! Material dispersion: Sellmeier media, refractive index and wavevector.

use std::sync::Once;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::units::{wavelength_from_omega, C0};

const BUNDLED_MEDIA: &str = include_str!("../data/media.toml");

/// Default operating temperature [K].
pub const DEFAULT_TEMPERATURE: f64 = 293.0;

static IGNORED_TEMPERATURE: Once = Once::new();

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SellmeierForm {
    /// `n^2 = 1 + sum B l^2 / (l^2 - C)`, coefficient pairs `[B, C]`.
    Standard,
    /// Two-pole form with a quadratic temperature parameter, eleven coefficients.
    TemperatureExtended,
}

impl SellmeierForm {
    fn name(self) -> &'static str {
        match self {
            SellmeierForm::Standard => "standard",
            SellmeierForm::TemperatureExtended => "temperature_extended",
        }
    }

    fn check_count(self, got: usize) -> Result<()> {
        let ok = match self {
            SellmeierForm::Standard => got >= 2 && got % 2 == 0,
            SellmeierForm::TemperatureExtended => got == 11,
        };
        if ok {
            return Ok(());
        }
        Err(Error::CoefficientCount {
            form: self.name(),
            expected: match self {
                SellmeierForm::Standard => "a positive even number of",
                SellmeierForm::TemperatureExtended => "11",
            },
            got,
        })
    }
}

/// A dispersive medium with an extraordinary-index Sellmeier model.
#[derive(Debug, Clone, PartialEq)]
pub struct Medium {
    pub name: String,
    pub aliases: Vec<String>,
    pub form: SellmeierForm,
    pub coefficients: Vec<f64>,
    /// Closed wavelength interval [um] where the model may be evaluated.
    pub valid_range: (f64, f64),
    /// Kelvin. Temperature-independent forms are taken to hold at this value.
    pub reference_temperature: f64,
    pub source: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMedium {
    name: Option<String>,
    #[serde(default)]
    aliases: Vec<String>,
    form: Option<SellmeierForm>,
    coefficients: Option<Vec<f64>>,
    valid_range_um: Option<Vec<f64>>,
    reference_temperature_k: Option<f64>,
    source: Option<String>,
}

impl RawMedium {
    fn validate(self) -> Result<Medium> {
        let name = self.name.ok_or_else(|| Error::MissingField("name".into()))?;
        let form = self.form.ok_or_else(|| Error::MissingField("form".into()))?;
        let coefficients = self
            .coefficients
            .ok_or_else(|| Error::MissingField("coefficients".into()))?;
        let range = self
            .valid_range_um
            .ok_or_else(|| Error::MissingField("valid_range_um".into()))?;
        form.check_count(coefficients.len())?;
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse(format!("non-finite coefficient in `{name}`")));
        }
        let [min, max] = range[..] else {
            return Err(Error::Parse(format!(
                "valid_range_um of `{name}` needs two entries, got {}",
                range.len()
            )));
        };
        if !(min > 0.0 && max > min) {
            return Err(Error::EmptyRange { min, max });
        }
        Ok(Medium {
            name,
            aliases: self.aliases,
            form,
            coefficients,
            valid_range: (min, max),
            reference_temperature: self.reference_temperature_k.unwrap_or(DEFAULT_TEMPERATURE),
            source: self.source,
        })
    }
}

impl Medium {
    /// Parses and validates a single medium document (one top-level table).
    pub fn from_toml_str(doc: &str) -> Result<Self> {
        let raw: RawMedium = toml::from_str(doc)?;
        raw.validate()
    }

    /// Constant-index medium, handy for synthetic checks.
    pub fn constant(name: &str, index: f64) -> Result<Self> {
        if !(index >= 1.0) {
            return Err(Error::invalid("index", format!("{index} must be >= 1")));
        }
        Ok(Medium {
            name: name.to_string(),
            aliases: Vec::new(),
            form: SellmeierForm::Standard,
            coefficients: vec![index * index - 1.0, 0.0],
            valid_range: (0.1, 100.0),
            reference_temperature: DEFAULT_TEMPERATURE,
            source: None,
        })
    }

    pub fn vacuum() -> Self {
        Medium::constant("vacuum", 1.0).expect("unit index is valid")
    }

    pub fn matches(&self, name: &str) -> bool {
        self.name.eq_ignore_ascii_case(name) || self.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
    }

    pub fn contains(&self, wavelength_um: f64) -> bool {
        wavelength_um >= self.valid_range.0 && wavelength_um <= self.valid_range.1
    }

    /// Extraordinary refractive index at `wavelength_um` and `temperature` [K].
    pub fn refractive_index(&self, wavelength_um: f64, temperature: f64) -> Result<f64> {
        if !self.contains(wavelength_um) {
            return Err(Error::OutOfRange {
                medium: self.name.clone(),
                wavelength: wavelength_um,
                min: self.valid_range.0,
                max: self.valid_range.1,
            });
        }
        let l2 = wavelength_um * wavelength_um;
        let c = &self.coefficients;
        let n2 = match self.form {
            SellmeierForm::Standard => {
                if (temperature - self.reference_temperature).abs() > 1e-9 {
                    IGNORED_TEMPERATURE.call_once(|| {
                        log::warn!(
                            "medium `{}` has no temperature terms; evaluating at {} K as if at {} K",
                            self.name,
                            temperature,
                            self.reference_temperature
                        )
                    });
                }
                1.0 + c.chunks_exact(2).map(|bc| bc[0] * l2 / (l2 - bc[1])).sum::<f64>()
            }
            SellmeierForm::TemperatureExtended => {
                let t = temperature - 273.15;
                let t0 = self.reference_temperature - 273.15;
                let f = (t - t0) * (t + t0 + 2.0 * 273.16);
                let pole1 = c[2] + c[8] * f;
                let pole2 = c[4] + c[10] * f;
                c[0] + c[6] * f + (c[1] + c[7] * f) / (l2 - pole1 * pole1) + (c[3] + c[9] * f) / (l2 - pole2 * pole2)
                    - c[5] * l2
            }
        };
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::Domain {
                quantity: "refractive index",
                detail: format!("n^2 = {n2} for `{}` at {wavelength_um} um", self.name),
            });
        }
        Ok(n2.sqrt())
    }

    /// `k = n(omega) omega / c0` [rad/um] for angular frequency `omega` [rad/fs].
    pub fn wavevector(&self, omega: f64, temperature: f64) -> Result<f64> {
        if !(omega > 0.0) {
            return Err(Error::invalid("omega", format!("{omega} must be positive")));
        }
        let n = self.refractive_index(wavelength_from_omega(omega), temperature)?;
        Ok(n * omega / C0)
    }
}

/// A named collection of media, as loaded from one configuration document.
#[derive(Debug, Clone, PartialEq)]
pub struct MediaSet {
    pub media: Vec<Medium>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMediaSet {
    #[allow(dead_code)]
    version: Option<u32>,
    #[serde(default)]
    medium: Vec<RawMedium>,
}

impl MediaSet {
    pub fn from_toml_str(doc: &str) -> Result<Self> {
        let raw: RawMediaSet = toml::from_str(doc)?;
        let media = raw
            .medium
            .into_iter()
            .map(RawMedium::validate)
            .collect::<Result<Vec<_>>>()?;
        Ok(MediaSet { media })
    }

    /// The media shipped with the crate: vacuum, MgSLT and N-SF14.
    pub fn bundled() -> Self {
        MediaSet::from_toml_str(BUNDLED_MEDIA).expect("bundled media file is valid")
    }

    pub fn get(&self, name: &str) -> Result<&Medium> {
        self.media
            .iter()
            .find(|m| m.matches(name))
            .ok_or_else(|| Error::UnknownMedium(name.to_string()))
    }

    /// Adds `other`'s media, replacing same-named entries.
    pub fn merge(&mut self, other: MediaSet) {
        for m in other.media {
            self.media.retain(|existing| existing.name != m.name);
            self.media.push(m);
        }
    }
}

/// Loads one medium document. See [`Medium::from_toml_str`].
pub fn load_medium(doc: &str) -> Result<Medium> {
    Medium::from_toml_str(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::omega_from_wavelength;
    use std::f64::consts::PI;

    fn mgslt() -> Medium {
        MediaSet::bundled().get("MgSLT").unwrap().clone()
    }

    #[test]
    fn vacuum_document_gives_unit_index() {
        let m = load_medium(
            r#"
            name = "vacuum"
            form = "standard"
            coefficients = [0.0, 0.0]
            valid_range_um = [0.1, 100.0]
            "#,
        )
        .unwrap();
        for lambda in [0.1, 0.532, 1.0, 7.3, 100.0] {
            assert_eq!(m.refractive_index(lambda, 293.0).unwrap(), 1.0);
            assert_eq!(m.refractive_index(lambda, 400.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn short_temperature_extended_entry_is_rejected() {
        let err = load_medium(
            r#"
            name = "broken"
            form = "temperature_extended"
            coefficients = [4.5, 0.08, 0.19]
            valid_range_um = [0.4, 4.0]
            "#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::CoefficientCount { got: 3, .. }), "{err}");
        assert!(err.to_string().contains("coefficient count mismatch"));
    }

    #[test]
    fn missing_fields_and_empty_range_are_reported() {
        let err =
            load_medium("form = \"standard\"\ncoefficients = [0.0, 0.0]\nvalid_range_um = [0.1, 1.0]").unwrap_err();
        assert_eq!(err, Error::MissingField("name".into()));
        let err =
            load_medium("name = \"x\"\nform = \"standard\"\ncoefficients = [0.0, 0.0]\nvalid_range_um = [1.0, 1.0]")
                .unwrap_err();
        assert_eq!(err, Error::EmptyRange { min: 1.0, max: 1.0 });
        assert!(err.is_schema());
    }

    #[test]
    fn mgslt_matches_frozen_reference() {
        // Reference values from tools/oracles.py (50-digit evaluation of the same formula).
        let m = mgslt();
        let n1064 = m.refractive_index(1.064, 293.0).unwrap();
        let n532 = m.refractive_index(0.532, 293.0).unwrap();
        assert!((n1064 - 2.128_706_752_711_117).abs() < 1e-9, "{n1064}");
        assert!((n532 - 2.195_038_094_044_423).abs() < 1e-9, "{n532}");
        assert!(n532 > n1064);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let m = mgslt();
        let err = m.refractive_index(0.2, 293.0).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { .. }));
        assert!(m.refractive_index(6.5, 293.0).is_err());
    }

    #[test]
    fn vacuum_wavevector_at_one_micron() {
        let k = Medium::vacuum().wavevector(2.0 * PI * C0, 293.0).unwrap();
        assert!((k - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn constant_index_wavevector_is_linear() {
        let m = Medium::constant("glass", 1.5).unwrap();
        let w = omega_from_wavelength(1.3);
        let k1 = m.wavevector(w, 293.0).unwrap();
        let k2 = m.wavevector(2.0 * w, 293.0).unwrap();
        assert!((k2 - 2.0 * k1).abs() < 1e-13 * k2);
    }

    #[test]
    fn wavevector_over_omega_is_index_over_c() {
        let m = mgslt();
        for i in 0..200 {
            let lambda = 0.45 + 3.0 * i as f64 / 200.0;
            let w = omega_from_wavelength(lambda);
            let n = m.refractive_index(wavelength_from_omega(w), 293.0).unwrap();
            let k = m.wavevector(w, 293.0).unwrap();
            assert!(((k / w) / (n / C0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mgslt_has_normal_dispersion_in_the_near_infrared() {
        let m = mgslt();
        let h = 1e-4;
        for i in 0..=120 {
            let lambda = 0.6 + 1.2 * i as f64 / 120.0;
            let d = (m.refractive_index(lambda + h, 293.0).unwrap() - m.refractive_index(lambda - h, 293.0).unwrap())
                / (2.0 * h);
            assert!(d < 0.0, "dn/dl = {d} at {lambda}");
        }
    }

    #[test]
    fn temperature_shifts_mgslt_index() {
        let m = mgslt();
        let cold = m.refractive_index(1.064, 293.0).unwrap();
        let hot = m.refractive_index(1.064, 373.0).unwrap();
        assert!(hot > cold);
        // At the fit's reference temperature the temperature terms vanish.
        let at_ref = m.refractive_index(1.064, m.reference_temperature).unwrap();
        let c = &m.coefficients;
        let l2 = 1.064f64.powi(2);
        let manual = (c[0] + c[1] / (l2 - c[2] * c[2]) + c[3] / (l2 - c[4] * c[4]) - c[5] * l2).sqrt();
        assert!((at_ref - manual).abs() < 1e-15);
    }

    #[test]
    fn aliases_resolve() {
        let set = MediaSet::bundled();
        assert_eq!(set.get("SF14").unwrap().name, "N-SF14");
        assert_eq!(set.get("mgo:slt").unwrap().name, "MgSLT");
        assert!(matches!(set.get("BK7"), Err(Error::UnknownMedium(_))));
    }
}

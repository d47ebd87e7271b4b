//! Chirped quasi-phase-matched device: grating wavevector, phase mismatch and tuning curves.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biphoton::spectral_amplitude;
use crate::dispersion::{MediaSet, Medium, DEFAULT_TEMPERATURE};
use crate::error::{invalid, Error, Result};
use crate::units::{omega_from_wavelength, RAD_PER_CM2};

/// Linearly chirped QPM crystal, `K(z) = 2 pi / lambda0 - eta z`.
#[derive(Debug, Clone, PartialEq)]
pub struct QpmDevice {
    pub medium: Medium,
    /// Crystal length [um].
    pub length: f64,
    /// Poling period at the input face [um].
    pub lambda0: f64,
    /// Chirp rate [rad/um^2].
    pub chirp_rate: f64,
    /// Pump vacuum wavelength [um].
    pub pump_wavelength: f64,
    /// Kelvin.
    pub temperature: f64,
    pub tag: String,
    pump_omega: f64,
    pump_k: f64,
}

impl QpmDevice {
    pub fn new(
        medium: Medium,
        length: f64,
        lambda0: f64,
        chirp_rate: f64,
        pump_wavelength: f64,
        temperature: f64,
    ) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid("length", format!("{length} um must be positive")));
        }
        if !(lambda0 > 0.0 && lambda0.is_finite()) {
            return Err(invalid("lambda0", format!("{lambda0} um must be positive")));
        }
        if !chirp_rate.is_finite() {
            return Err(invalid("chirp_rate", "must be finite"));
        }
        if !(temperature > 0.0) {
            return Err(invalid("temperature", format!("{temperature} K must be positive")));
        }
        let k_end = 2.0 * PI / lambda0 - chirp_rate * length;
        if !(k_end > 0.0) {
            return Err(invalid(
                "chirp_rate",
                format!("grating wavevector reaches {k_end:.6} rad/um at the output face"),
            ));
        }
        let pump_omega = omega_from_wavelength(pump_wavelength);
        let pump_k = medium.wavevector(pump_omega, temperature)?;
        let tag = format!(
            "{} L={} mm, lambda0={} um, eta={} rad/cm^2",
            medium.name,
            length * 1e-3,
            lambda0,
            chirp_rate / RAD_PER_CM2
        );
        Ok(QpmDevice {
            medium,
            length,
            lambda0,
            chirp_rate,
            pump_wavelength,
            temperature,
            tag,
            pump_omega,
            pump_k,
        })
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    /// Pump angular frequency [rad/fs].
    pub fn pump_omega(&self) -> f64 {
        self.pump_omega
    }

    /// Pump wavevector inside the crystal [rad/um].
    pub fn pump_wavevector(&self) -> f64 {
        self.pump_k
    }

    /// Degenerate angular frequency, half the pump.
    pub fn degenerate_omega(&self) -> f64 {
        0.5 * self.pump_omega
    }

    pub fn wavevector(&self, omega: f64) -> Result<f64> {
        self.medium.wavevector(omega, self.temperature)
    }

    /// `K(z)` [rad/um] for `z` in `[0, L]`.
    pub fn grating_wavevector(&self, z: f64) -> Result<f64> {
        if !(0.0..=self.length).contains(&z) {
            return Err(invalid("z", format!("{z} um is outside [0, {}] um", self.length)));
        }
        Ok(2.0 * PI / self.lambda0 - self.chirp_rate * z)
    }

    /// Local poling period `2 pi / K(z)` [um].
    pub fn poling_period(&self, z: f64) -> Result<f64> {
        Ok(2.0 * PI / self.grating_wavevector(z)?)
    }

    /// Phase mismatch at the input face, `dk(omega, 0; phi)`.
    pub fn phase_mismatch_at_input(&self, omega: f64, geom: &Geometry) -> Result<f64> {
        let idler = self.pump_omega - omega;
        if !(omega > 0.0 && idler > 0.0) {
            return Err(invalid(
                "omega",
                format!("{omega} rad/fs is outside (0, {}) rad/fs", self.pump_omega),
            ));
        }
        let ks = self.wavevector(omega)?;
        let ki = self.wavevector(idler)?;
        let (ks_z, ki_z) = if geom.phi_deg == 0.0 {
            (ks, ki)
        } else {
            let s = geom.phi_deg.to_radians().sin();
            let ns = ks * crate::units::C0 / omega;
            let ni = ki * crate::units::C0 / idler;
            let (as_, ai) = match geom.convention {
                AngleConvention::Symmetric => ((s / ns).powi(2), (s / ni).powi(2)),
                AngleConvention::MomentumConserving => ((s / ns).powi(2), (omega / idler * s / ni).powi(2)),
            };
            (
                longitudinal(ks, as_, "signal", omega)?,
                longitudinal(ki, ai, "idler", idler)?,
            )
        };
        Ok(self.pump_k - ks_z - ki_z - 2.0 * PI / self.lambda0)
    }

    /// `dk(omega, z; phi)` [rad/um].
    pub fn phase_mismatch(&self, omega: f64, z: f64, geom: &Geometry) -> Result<f64> {
        let k = self.grating_wavevector(z)?;
        Ok(self.phase_mismatch_at_input(omega, geom)? + 2.0 * PI / self.lambda0 - k)
    }
}

fn longitudinal(k: f64, sin2: f64, branch: &'static str, omega: f64) -> Result<f64> {
    let arg = 1.0 - sin2;
    if arg < 0.0 {
        return Err(Error::Domain {
            quantity: branch,
            detail: format!("square-root argument {arg:.3e} < 0 at omega = {omega} rad/fs"),
        });
    }
    Ok(k * arg.sqrt())
}

/// How the external angle enters the transverse projection of the daughter wavevectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleConvention {
    /// Signal and idler each leave at the external angle `phi`:
    /// `k_j sqrt(1 - (sin phi / n_j)^2)` for both photons. Even in `omega <-> omega_p - omega`.
    #[default]
    Symmetric,
    /// Idler carries the signal's transverse momentum:
    /// `k_i sqrt(1 - (omega / omega_i)^2 (sin phi / n_i)^2)`.
    MomentumConserving,
}

/// Emission geometry. `phi_deg` is the external angle into air; 0 is collinear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub phi_deg: f64,
    #[serde(default)]
    pub convention: AngleConvention,
}

impl Geometry {
    pub fn collinear() -> Self {
        Geometry {
            phi_deg: 0.0,
            convention: AngleConvention::Symmetric,
        }
    }

    pub fn noncollinear(phi_deg: f64) -> Result<Self> {
        let g = Geometry {
            phi_deg,
            convention: AngleConvention::Symmetric,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_convention(mut self, convention: AngleConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn is_collinear(&self) -> bool {
        self.phi_deg == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi_deg.abs() < 90.0) {
            return Err(invalid("phi", format!("{} deg must satisfy |phi| < 90", self.phi_deg)));
        }
        Ok(())
    }
}

/// Chirp rate [rad/um^2] taking the period from `lambda_start` at the input to `lambda_end` at `length`.
pub fn design_chirp(lambda_start: f64, lambda_end: f64, length: f64) -> Result<f64> {
    for (name, v) in [
        ("lambda_start", lambda_start),
        ("lambda_end", lambda_end),
        ("length", length),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(name, format!("{v} must be positive")));
        }
    }
    Ok((2.0 * PI / lambda_start - 2.0 * PI / lambda_end) / length)
}

/// Serializable device description. Either `chirp_rate_rad_per_cm2` or `lambda_end_um` fixes the chirp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSpec {
    pub medium: String,
    pub length_mm: f64,
    pub lambda0_um: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_end_um: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chirp_rate_rad_per_cm2: Option<f64>,
    pub pump_wavelength_um: f64,
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
}

fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE
}

impl DeviceSpec {
    /// The 20 mm MgSLT device poled from 8.000 to 8.825 um, pumped at 532 nm.
    pub fn reference_10pct() -> Self {
        DeviceSpec {
            medium: "MgSLT".into(),
            length_mm: 20.0,
            lambda0_um: 8.000,
            lambda_end_um: Some(8.825),
            chirp_rate_rad_per_cm2: None,
            pump_wavelength_um: 0.532,
            temperature_k: DEFAULT_TEMPERATURE,
        }
    }

    /// Same crystal with the period swept from 8.000 to 11.765 um.
    pub fn reference_47pct() -> Self {
        DeviceSpec {
            lambda_end_um: Some(11.765),
            ..Self::reference_10pct()
        }
    }

    pub fn chirp_rate(&self) -> Result<f64> {
        match (self.chirp_rate_rad_per_cm2, self.lambda_end_um) {
            (Some(_), Some(_)) => Err(invalid(
                "chirp_rate_rad_per_cm2",
                "give either chirp_rate_rad_per_cm2 or lambda_end_um, not both",
            )),
            (Some(eta), None) => Ok(eta * RAD_PER_CM2),
            (None, Some(end)) => design_chirp(self.lambda0_um, end, self.length_mm * 1e3),
            (None, None) => Err(Error::MissingField("lambda_end_um".into())),
        }
    }

    pub fn build(&self, media: &MediaSet) -> Result<QpmDevice> {
        let medium = media.get(&self.medium)?.clone();
        QpmDevice::new(
            medium,
            self.length_mm * 1e3,
            self.lambda0_um,
            self.chirp_rate()?,
            self.pump_wavelength_um,
            self.temperature_k,
        )
    }
}

/// Quantity stored in a tuning-curve cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuningQuantity {
    /// `|psi|^2 / 2 pi`.
    #[default]
    PhotonNumber,
    /// Raw `dk(omega, L; phi)` [rad/um], for debugging.
    PhaseMismatch,
}

/// Angle-resolved emission map. `values[i * phi.len() + j]` belongs to `(lambda[i], phi[j])`;
/// `None` marks cells outside the physical domain.
#[derive(Debug, Clone, PartialEq)]
pub struct TuningCurve {
    pub lambda_um: Vec<f64>,
    pub phi_deg: Vec<f64>,
    pub values: Vec<Option<f64>>,
    pub quantity: TuningQuantity,
}

impl TuningCurve {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.phi_deg.len() + j]
    }

    pub fn flagged(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn column(&self, j: usize) -> Vec<Option<f64>> {
        (0..self.lambda_um.len()).map(|i| self.get(i, j)).collect()
    }
}

/// Evaluates `quantity` on the `lambda_um x phi_deg` grid, cells in parallel.
pub fn tuning_curve(
    device: &QpmDevice,
    lambda_um: &[f64],
    phi_deg: &[f64],
    convention: AngleConvention,
    quantity: TuningQuantity,
) -> Result<TuningCurve> {
    if lambda_um.is_empty() || phi_deg.is_empty() {
        return Err(Error::Grid("tuning-curve grids must be nonempty".into()));
    }
    for &phi in phi_deg {
        Geometry {
            phi_deg: phi,
            convention,
        }
        .validate()?;
    }
    let ncol = phi_deg.len();
    let values = (0..lambda_um.len() * ncol)
        .into_par_iter()
        .map(|idx| {
            let omega = omega_from_wavelength(lambda_um[idx / ncol]);
            let geom = Geometry {
                phi_deg: phi_deg[idx % ncol],
                convention,
            };
            let v = match quantity {
                TuningQuantity::PhotonNumber => {
                    spectral_amplitude(device, omega, &geom, 1.0).map(|psi| psi.norm_sqr() / (2.0 * PI))
                }
                TuningQuantity::PhaseMismatch => device.phase_mismatch(omega, device.length, &geom),
            };
            v.ok()
        })
        .collect();
    Ok(TuningCurve {
        lambda_um: lambda_um.to_vec(),
        phi_deg: phi_deg.to_vec(),
        values,
        quantity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> QpmDevice {
        DeviceSpec::reference_10pct().build(&MediaSet::bundled()).unwrap()
    }

    #[test]
    fn unchirped_grating_is_constant() {
        let d = QpmDevice::new(Medium::vacuum(), 20_000.0, 8.0, 0.0, 0.532, 293.0).unwrap();
        for z in [0.0, 1.0, 10_000.0, 20_000.0] {
            assert!((d.grating_wavevector(z).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        }
        assert!(d.grating_wavevector(-1.0).is_err());
        assert!(d.grating_wavevector(20_000.1).is_err());
    }

    #[test]
    fn reference_grating_endpoints() {
        let d = QpmDevice::new(Medium::vacuum(), 20_000.0, 8.0, 3.67112e-6, 0.532, 293.0).unwrap();
        assert_eq!(d.grating_wavevector(0.0).unwrap(), 2.0 * PI / 8.0);
        let k_end = d.grating_wavevector(20_000.0).unwrap();
        assert!((k_end - 0.711_976).abs() < 5e-7, "{k_end}");
        assert!((d.poling_period(20_000.0).unwrap() - 8.825).abs() < 5e-4);
    }

    #[test]
    fn design_chirp_examples() {
        let eta = design_chirp(8.0, 8.825, 20_000.0).unwrap() / RAD_PER_CM2;
        assert!((eta - 367.112).abs() < 0.05, "{eta}");
        let eta = design_chirp(8.0, 11.765, 20_000.0).unwrap() / RAD_PER_CM2;
        assert!((eta - 1256.5).abs() < 1.0, "{eta}");
        assert_eq!(design_chirp(8.3, 8.3, 20_000.0).unwrap(), 0.0);
        assert!(design_chirp(-1.0, 8.0, 1.0).is_err());
    }

    #[test]
    fn design_chirp_round_trips_the_end_period() {
        for (start, end) in [(8.0, 8.825), (8.0, 11.765), (6.5, 7.1), (9.0, 8.2)] {
            let eta = design_chirp(start, end, 20_000.0).unwrap();
            let d = QpmDevice::new(Medium::vacuum(), 20_000.0, start, eta, 0.532, 293.0).unwrap();
            let got = d.poling_period(20_000.0).unwrap();
            assert!((got / end - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn grating_is_monotone_for_positive_chirp() {
        let d = reference();
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let k = d.grating_wavevector(d.length * i as f64 / 1000.0).unwrap();
            assert!(k < prev);
            prev = k;
        }
    }

    #[test]
    fn collinear_degenerate_reduction() {
        let d = reference();
        let wd = d.degenerate_omega();
        for z in [0.0, 7_000.0, 20_000.0] {
            let dk = d.phase_mismatch(wd, z, &Geometry::collinear()).unwrap();
            let closed = d.pump_wavevector() - 2.0 * d.wavevector(wd).unwrap() - d.grating_wavevector(z).unwrap();
            assert!((dk - closed).abs() <= 1e-12 * d.pump_wavevector());
        }
    }

    #[test]
    fn symmetric_convention_is_even_under_exchange() {
        let d = reference();
        let geom = Geometry::noncollinear(0.25).unwrap();
        let wp = d.pump_omega();
        for i in 1..50 {
            let w = omega_from_wavelength(0.8) + i as f64 * 0.01;
            let a = d.phase_mismatch(w, 5_000.0, &geom).unwrap();
            let b = d.phase_mismatch(wp - w, 5_000.0, &geom).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-3));
        }
    }

    #[test]
    fn momentum_conserving_matches_transverse_projection() {
        let d = reference();
        let geom = Geometry::noncollinear(2.0)
            .unwrap()
            .with_convention(AngleConvention::MomentumConserving);
        let w = omega_from_wavelength(0.9);
        let wi = d.pump_omega() - w;
        let q = w * 2f64.to_radians().sin() / crate::units::C0;
        let ks = d.wavevector(w).unwrap();
        let ki = d.wavevector(wi).unwrap();
        let expect = d.pump_wavevector() - (ks * ks - q * q).sqrt() - (ki * ki - q * q).sqrt() - 2.0 * PI / 8.0;
        let got = d.phase_mismatch_at_input(w, &geom).unwrap();
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn steep_angle_reports_branch() {
        let d = QpmDevice::new(Medium::vacuum(), 1000.0, 8.0, 1e-6, 0.532, 293.0).unwrap();
        let geom = Geometry::noncollinear(60.0)
            .unwrap()
            .with_convention(AngleConvention::MomentumConserving);
        let w = d.pump_omega() * 0.8;
        match d.phase_mismatch_at_input(w, &geom) {
            Err(Error::Domain { quantity, .. }) => assert_eq!(quantity, "idler"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_devices() {
        let m = Medium::vacuum();
        assert!(QpmDevice::new(m.clone(), 0.0, 8.0, 0.0, 0.532, 293.0).is_err());
        assert!(QpmDevice::new(m.clone(), 1000.0, -8.0, 0.0, 0.532, 293.0).is_err());
        assert!(QpmDevice::new(m, 20_000.0, 8.0, 1e-4, 0.532, 293.0).is_err());
        assert!(Geometry::noncollinear(90.0).is_err());
    }

    #[test]
    fn device_spec_requires_one_chirp_source() {
        let mut spec = DeviceSpec::reference_10pct();
        spec.chirp_rate_rad_per_cm2 = Some(367.112);
        assert!(spec.chirp_rate().is_err());
        spec.lambda_end_um = None;
        assert!((spec.chirp_rate().unwrap() - 3.67112e-6).abs() < 1e-18);
        spec.chirp_rate_rad_per_cm2 = None;
        assert_eq!(
            spec.chirp_rate().unwrap_err(),
            Error::MissingField("lambda_end_um".into())
        );
    }

    #[test]
    fn tuning_curve_is_even_in_angle() {
        let d = reference();
        let lambdas: Vec<f64> = (0..40).map(|i| 0.8 + 0.02 * i as f64).collect();
        let tc = tuning_curve(
            &d,
            &lambdas,
            &[-0.25, 0.25],
            AngleConvention::Symmetric,
            TuningQuantity::PhotonNumber,
        )
        .unwrap();
        for i in 0..lambdas.len() {
            let (a, b) = (tc.get(i, 0).unwrap(), tc.get(i, 1).unwrap());
            assert!((a - b).abs() <= 1e-10 * a.max(b));
        }
    }

    #[test]
    fn single_cell_tuning_curve_matches_direct_call() {
        let d = reference();
        let tc = tuning_curve(
            &d,
            &[1.2],
            &[0.3],
            AngleConvention::Symmetric,
            TuningQuantity::PhotonNumber,
        )
        .unwrap();
        let psi = spectral_amplitude(
            &d,
            omega_from_wavelength(1.2),
            &Geometry::noncollinear(0.3).unwrap(),
            1.0,
        )
        .unwrap();
        assert_eq!(tc.get(0, 0).unwrap(), psi.norm_sqr() / (2.0 * PI));
    }

    #[test]
    fn out_of_domain_cells_are_flagged() {
        let d = reference();
        // 0.4 um signal needs an idler beyond the pump frequency, 7 um is past the medium range.
        let tc = tuning_curve(
            &d,
            &[0.4, 1.064, 7.0],
            &[0.0],
            AngleConvention::Symmetric,
            TuningQuantity::PhaseMismatch,
        )
        .unwrap();
        assert_eq!(tc.flagged(), 2);
        assert!(tc.get(1, 0).is_some());
    }
}

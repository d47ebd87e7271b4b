//! Sum-frequency correlation traces `R(tau)` and their widths.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::biphoton::{write_table, SpectralAmplitude};
use crate::error::{invalid, Error, Result};
use crate::grid::{crossing, UniformGrid};
use crate::units::omega_to_thz;

pub const DEFAULT_ZERO_PAD: usize = 8;
pub const DEFAULT_SPOT_CHECKS: usize = 16;
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
/// Allowed FFT vs direct-sum deviation, relative to the peak time-domain amplitude.
pub const SPOT_CHECK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformOptions {
    /// Transform length is the next power of two at or above `zero_pad * n`.
    pub zero_pad: usize,
    /// Seed for picking the delays checked against the direct sum; `None` skips the check.
    pub spot_check_seed: Option<u64>,
    pub spot_checks: usize,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            zero_pad: DEFAULT_ZERO_PAD,
            spot_check_seed: Some(DEFAULT_SEED),
            spot_checks: DEFAULT_SPOT_CHECKS,
        }
    }
}

/// Time-domain amplitude `(d omega / 2 pi) sum psi_n exp(i omega_n tau)` on a centred delay grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeAmplitude {
    pub tau: Vec<f64>,
    pub values: Vec<Complex64>,
    pub step: f64,
}

/// Direct evaluation of the time-domain sum at one delay.
pub fn direct_sum(amp: &SpectralAmplitude, tau: f64) -> Complex64 {
    let w0 = amp.grid.start;
    let dw = amp.grid.step;
    let s: Complex64 = amp
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| v * Complex64::from_polar(1.0, n as f64 * dw * tau))
        .sum();
    s * Complex64::from_polar(dw / (2.0 * PI), w0 * tau)
}

/// FFT evaluation of the time-domain amplitude, cross-checked against [`direct_sum`].
pub fn transform(amp: &SpectralAmplitude, opts: &TransformOptions) -> Result<TimeAmplitude> {
    UniformGrid::detect(&amp.omega)?;
    if opts.zero_pad == 0 {
        return Err(invalid("zero_pad", "must be at least 1"));
    }
    let n = amp.len();
    let m = (n * opts.zero_pad).next_power_of_two();
    let dw = amp.grid.step;
    let dtau = 2.0 * PI / (m as f64 * dw);
    let mut buf = vec![Complex64::default(); m];
    buf[..n].copy_from_slice(&amp.values);
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);

    let half = m / 2;
    let mut tau = Vec::with_capacity(m);
    let mut values = Vec::with_capacity(m);
    for j in 0..m {
        let k = (j + half) % m;
        let t = (j as f64 - half as f64) * dtau;
        tau.push(t);
        values.push(buf[k] * Complex64::from_polar(dw / (2.0 * PI), amp.grid.start * t));
    }
    let out = TimeAmplitude {
        tau,
        values,
        step: dtau,
    };
    if let Some(seed) = opts.spot_check_seed {
        spot_check(amp, &out, seed, opts.spot_checks)?;
    }
    Ok(out)
}

fn spot_check(amp: &SpectralAmplitude, t: &TimeAmplitude, seed: u64, count: usize) -> Result<()> {
    let peak = t.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let j = rng.random_range(0..t.tau.len());
        let deviation = (direct_sum(amp, t.tau[j]) - t.values[j]).norm() / peak;
        if deviation > SPOT_CHECK_TOLERANCE {
            return Err(Error::TransformMismatch {
                tau: t.tau[j],
                deviation,
            });
        }
    }
    Ok(())
}

/// Sampled `R(tau)`, normalised to unit peak.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTrace {
    pub tau: Vec<f64>,
    pub values: Vec<f64>,
    pub normalized: bool,
    /// Centre frequency `omega_p / 2` [THz].
    pub center_thz: f64,
    pub step: f64,
    /// Peak of `|psi~|^2` before normalisation.
    pub raw_peak: f64,
}

impl CorrelationTrace {
    pub fn from_samples(tau: Vec<f64>, values: Vec<f64>, center_thz: f64) -> Result<Self> {
        if tau.len() != values.len() {
            return Err(Error::ShapeMismatch(tau.len(), values.len()));
        }
        let g = UniformGrid::detect(&tau)?;
        Ok(CorrelationTrace {
            tau,
            values,
            normalized: false,
            center_thz,
            step: g.step,
            raw_peak: f64::NAN,
        })
    }

    pub fn fwhm(&self, mode: WidthMode) -> Result<f64> {
        fwhm(self, mode)
    }

    pub fn write_csv<W: Write>(&self, out: W, comments: &[String]) -> Result<()> {
        write_table(
            out,
            comments,
            &["tau_fs", "r_normalized"],
            self.tau.iter().zip(&self.values).map(|(t, r)| vec![*t, *r]),
        )
    }

    /// Rows with `|tau| <= half_window` only.
    pub fn window(&self, half_window: f64) -> CorrelationTrace {
        let keep: Vec<usize> = (0..self.tau.len())
            .filter(|&i| self.tau[i].abs() <= half_window)
            .collect();
        CorrelationTrace {
            tau: keep.iter().map(|&i| self.tau[i]).collect(),
            values: keep.iter().map(|&i| self.values[i]).collect(),
            ..self.clone()
        }
    }
}

fn trace_from(amp: &SpectralAmplitude, t: TimeAmplitude) -> CorrelationTrace {
    let mut values: Vec<f64> = t.values.iter().map(|v| v.norm_sqr()).collect();
    let peak = values.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        values.iter_mut().for_each(|v| *v /= peak);
    }
    CorrelationTrace {
        tau: t.tau,
        values,
        normalized: peak > 0.0,
        center_thz: omega_to_thz(0.5 * amp.pump_omega),
        step: t.step,
        raw_peak: peak,
    }
}

/// Noncollinear SFG signal: the full band contributes.
pub fn sfg_noncollinear(amp: &SpectralAmplitude, opts: &TransformOptions) -> Result<CorrelationTrace> {
    let flagged = amp.flagged_count();
    if flagged > 0 {
        return Err(Error::FlaggedCells(flagged));
    }
    Ok(trace_from(amp, transform(amp, opts)?))
}

/// Collinear SFG signal: only `omega >= omega_p / 2` contributes.
pub fn sfg_collinear(amp: &SpectralAmplitude, pump_omega: f64, opts: &TransformOptions) -> Result<CorrelationTrace> {
    let half = 0.5 * pump_omega;
    if !(amp.grid.start <= half && amp.grid.end() >= half) {
        return Err(Error::Grid(format!(
            "grid [{}, {}] rad/fs does not reach omega_p/2 = {half} rad/fs",
            amp.grid.start,
            amp.grid.end()
        )));
    }
    let flagged = (0..amp.len())
        .filter(|&i| amp.flagged[i] && amp.omega[i] >= half)
        .count();
    if flagged > 0 {
        return Err(Error::FlaggedCells(flagged));
    }
    let values = amp
        .omega
        .iter()
        .zip(&amp.values)
        .map(|(&w, &v)| if w >= half { v } else { Complex64::default() })
        .collect();
    let upper = amp.with_values(values)?;
    Ok(trace_from(amp, transform(&upper, opts)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthMode {
    /// Outermost half-maximum crossings anywhere in the trace.
    #[default]
    Outermost,
    /// Crossings bounding the lobe that contains the global peak.
    Central,
}

/// Full width at half maximum [fs], linearly interpolated.
pub fn fwhm(trace: &CorrelationTrace, mode: WidthMode) -> Result<f64> {
    let y = &trace.values;
    let x = &trace.tau;
    let n = y.len();
    if n < 3 {
        return Err(Error::Grid("trace too short".into()));
    }
    let (ipk, peak) = y.iter().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) },
    );
    if ipk == 0 || ipk == n - 1 {
        return Err(Error::PeakAtBoundary);
    }
    let level = 0.5 * peak;
    let (left, right) = match mode {
        WidthMode::Outermost => {
            let l = y.iter().position(|&v| v >= level).expect("peak exceeds level");
            let r = y.iter().rposition(|&v| v >= level).expect("peak exceeds level");
            (l, r)
        }
        WidthMode::Central => {
            let mut l = ipk;
            while l > 0 && y[l - 1] >= level {
                l -= 1;
            }
            let mut r = ipk;
            while r < n - 1 && y[r + 1] >= level {
                r += 1;
            }
            (l, r)
        }
    };
    if left == 0 || right == n - 1 {
        return Err(Error::NoHalfMaximum);
    }
    let a = crossing(x[left - 1], x[left], y[left - 1], y[left], level);
    let b = crossing(x[right], x[right + 1], y[right], y[right + 1], level);
    Ok(b - a)
}

/// Width expressed in optical cycles of `nu_c` [THz].
pub fn cycles(width_fs: f64, nu_c_thz: f64) -> f64 {
    width_fs * nu_c_thz * 1e-3
}

//! Ultrabroadband biphoton generation in chirped quasi-phase-matched crystals.
//!
//! Modules follow the computation chain: material [`dispersion`], the chirped
//! [`device`], the two-photon amplitude in [`biphoton`], phase filters in
//! [`compensation`], sum-frequency traces in [`correlation`] and the detection
//! chain in [`instrument`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biphoton;
pub mod compensation;
pub mod correlation;
pub mod device;
pub mod dispersion;
pub mod error;
pub mod grid;
pub mod instrument;
pub mod units;

pub use num_complex::Complex64;

pub use biphoton::{
    amplitude_parts, band_edges, bandwidth_thz, erfi, erfi_scaled, mean_photon_number, scan_omega, spectral_amplitude,
    spectral_phase, spectral_phase_curve, spectrum_scan, symmetric_scan, AmplitudeParts, SpectralAmplitude,
    SpectralPhaseCurve,
};
pub use compensation::{
    apply_compensator, measure_gdd, prism_pair_phase, Compensator, CompensatorSpec, DelayElement, PrismPair,
};
pub use correlation::{cycles, fwhm, sfg_collinear, sfg_noncollinear, CorrelationTrace, TransformOptions, WidthMode};
pub use device::{
    design_chirp, tuning_curve, AngleConvention, DeviceSpec, Geometry, QpmDevice, TuningCurve, TuningQuantity,
};
pub use dispersion::{load_medium, MediaSet, Medium, SellmeierForm};
pub use error::{Error, Result};
pub use grid::UniformGrid;
pub use instrument::{
    detected_spectrum, raw_counts_model, AcceptanceWindow, DetectedSpectrum, DetectorModel, Interpolation, Resolution,
};

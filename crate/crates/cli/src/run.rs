//! Scenario execution. Every table is rendered in memory before anything is written.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use biphoton_core::correlation::{DEFAULT_SEED, DEFAULT_SPOT_CHECKS};
use biphoton_core::units::{omega_from_wavelength, omega_to_thz, RAD_PER_CM2};
use biphoton_core::{
    apply_compensator, band_edges, bandwidth_thz, cycles, detected_spectrum, measure_gdd, raw_counts_model,
    sfg_collinear, sfg_noncollinear, spectral_phase_curve, spectrum_scan, symmetric_scan, tuning_curve,
    AcceptanceWindow, Compensator, CorrelationTrace, DetectorModel, MediaSet, QpmDevice, SpectralAmplitude,
    TransformOptions, TuningCurve,
};

use crate::scenario::{InstrumentSpec, Output, Scenario, Scheme};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides `band.points`.
    pub points: Option<usize>,
    /// Skips the FFT spot check against the direct sum.
    pub seedless: bool,
    /// Also writes a gnuplot script per table.
    pub gnuplot: bool,
    /// Directory for relative paths in the scenario.
    pub base_dir: Option<PathBuf>,
}

/// Rendered output files, name and contents.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub files: Vec<(String, String)>,
}

impl RunReport {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    /// Writes every file into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> CliResult<()> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        }
        Ok(())
    }
}

struct Summary {
    rows: Vec<(String, f64, &'static str)>,
}

impl Summary {
    fn push(&mut self, key: impl Into<String>, value: f64, unit: &'static str) {
        self.rows.push((key.into(), value, unit));
    }
}

fn resolve_path(base: &Option<PathBuf>, p: &Path) -> PathBuf {
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

fn header(scenario: &Scenario, name: &str) -> Vec<String> {
    let mut lines = vec![
        format!("biphoton-cli {}", env!("CARGO_PKG_VERSION")),
        format!("scenario: {name}"),
    ];
    lines.extend(
        scenario
            .echo()
            .lines()
            .filter(|l| !l.is_empty())
            .map(|l| format!("  {l}")),
    );
    lines
}

fn render(f: impl FnOnce(&mut Vec<u8>) -> biphoton_core::Result<()>) -> CliResult<String> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(String::from_utf8(buf).expect("tables are ASCII"))
}

fn comment_block(comments: &[String]) -> String {
    comments.iter().map(|c| format!("# {c}\n")).collect()
}

fn tuning_table(comments: &[String], tc: &TuningCurve) -> String {
    let mut s = comment_block(comments);
    s.push_str("wavelength_um,phi_deg,value\n");
    for (i, lam) in tc.lambda_um.iter().enumerate() {
        for (j, phi) in tc.phi_deg.iter().enumerate() {
            let v = tc.get(i, j).map(|v| v.to_string()).unwrap_or_else(|| "nan".into());
            let _ = writeln!(s, "{lam},{phi},{v}");
        }
    }
    s
}

fn summary_table(comments: &[String], summary: &Summary) -> String {
    let mut s = comment_block(comments);
    s.push_str("key,value,unit\n");
    for (k, v, u) in &summary.rows {
        let _ = writeln!(s, "{k},{v},{u}");
    }
    s
}

fn gnuplot_script(csv: &str, xlabel: &str, ylabel: &str, using: &str) -> String {
    format!(
        "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n\
         set xlabel '{xlabel}'\nset ylabel '{ylabel}'\nplot '{csv}' using {using} with lines\npause -1\n"
    )
}

fn detector(spec: &InstrumentSpec, base: &Option<PathBuf>) -> CliResult<Option<DetectorModel>> {
    let det = match (&spec.detector, &spec.detector_file) {
        (Some(name), None) => {
            let mut d = DetectorModel::builtin(name).map_err(|e| CliError::Schema(e.to_string()))?;
            d.interpolation = spec.interpolation;
            d
        }
        (None, Some(file)) => {
            let path = resolve_path(base, file);
            let text = fs::read(&path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("detector")
                .to_string();
            DetectorModel::from_csv(name, text.as_slice(), spec.interpolation)
                .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?
        }
        _ => return Ok(None),
    };
    Ok(Some(det.with_extrapolation(spec.extrapolate)))
}

fn schemes(s: Scheme) -> &'static [&'static str] {
    match s {
        Scheme::Noncollinear => &["noncollinear"],
        Scheme::Collinear => &["collinear"],
        Scheme::Both => &["noncollinear", "collinear"],
    }
}

/// Runs `scenario` and returns the rendered tables.
pub fn run_scenario(scenario: &Scenario, name: &str, opts: &RunOptions) -> CliResult<RunReport> {
    scenario.validate()?;
    let mut media = MediaSet::bundled();
    if let Some(file) = &scenario.media_file {
        let path = resolve_path(&opts.base_dir, file);
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        media.merge(MediaSet::from_toml_str(&text)?);
    }
    let spec = scenario.device.as_ref().expect("validated");
    let device = spec.build(&media)?.with_tag(name);
    let geom = scenario.geometry.geometry();
    geom.validate()?;

    let comments = header(scenario, name);
    let mut report = RunReport::default();
    let mut summary = Summary { rows: Vec::new() };
    let mut add = |report: &mut RunReport, file: String, contents: String, plot: Option<(&str, &str, &str)>| {
        if let (true, Some((x, y, using))) = (opts.gnuplot, plot) {
            let script = gnuplot_script(&file, x, y, using);
            report.files.push((file.replace(".csv", ".gp"), script));
        }
        report.files.push((file, contents));
    };

    summary.push("chirp_rate", device.chirp_rate / RAD_PER_CM2, "rad/cm^2");

    if scenario.outputs.contains(&Output::TuningCurve) {
        let t = scenario.tuning_curve.as_ref().expect("validated");
        let lam = linspace(t.lambda_min_um, t.lambda_max_um, t.lambda_points);
        let phi = linspace(t.phi_min_deg, t.phi_max_deg, t.phi_points);
        let tc = tuning_curve(&device, &lam, &phi, geom.convention, t.quantity)?;
        summary.push("tuning_flagged_cells", tc.flagged() as f64, "");
        add(
            &mut report,
            "tuning_curve.csv".into(),
            tuning_table(&comments, &tc),
            Some(("wavelength [um]", "phi [deg]", "1:2:3")),
        );
    }

    if let Some(band) = &scenario.band {
        let points = opts.points.unwrap_or(band.points);
        let amp = match band.lambda_max_um {
            Some(max) => spectrum_scan(&device, band.lambda_min_um, max, points, &geom)?,
            None => symmetric_scan(&device, band.lambda_min_um, points, &geom)?,
        };
        let omega_c = band
            .gdd_wavelength_um
            .map(omega_from_wavelength)
            .unwrap_or_else(|| device.degenerate_omega());
        band_metrics(
            scenario,
            &media,
            &device,
            &amp,
            omega_c,
            opts,
            &comments,
            &mut summary,
            &mut report,
            &mut add,
        )?;
    }

    if scenario.outputs.contains(&Output::DetectedSpectrum) {
        let inst = scenario.instrument.as_ref().expect("validated");
        let window = AcceptanceWindow::new(inst.phi_min_deg, inst.phi_max_deg, inst.angle_samples)?;
        let n = ((inst.lambda_max_nm - inst.lambda_min_nm) / inst.step_nm).round() as usize + 1;
        let lam = linspace(inst.lambda_min_nm, inst.lambda_max_nm, n);
        let det = detector(inst, &opts.base_dir)?;
        let spectrum = detected_spectrum(&device, &window, &lam, &inst.resolution, geom.convention, 1.0)?;
        let counts = match &det {
            Some(d) => Some(raw_counts_model(&lam, &spectrum.values, d, inst.coupling)?),
            None => None,
        };
        // the wavelength window may be cut by the detector table
        match spectrum.support(scenario.thresholds.edge_fraction) {
            Ok((short, long)) => {
                summary.push("detected_support_short", short, "nm");
                summary.push("detected_support_long", long, "nm");
            }
            Err(e) => log::warn!("detected support omitted from summary: {e}"),
        }
        summary.push("detected_flagged", spectrum.flagged_count() as f64, "");
        if let Some(c) = &counts {
            let peak = lam.iter().zip(c).fold(
                (0.0, f64::MIN),
                |best, (l, v)| if *v > best.1 { (*l, *v) } else { best },
            );
            summary.push("counts_peak_wavelength", peak.0, "nm");
        }
        let text = render(|buf| spectrum.write_csv(buf, &comments, counts.as_deref()))?;
        let using = if counts.is_some() { "1:3" } else { "1:2" };
        add(
            &mut report,
            "detected_spectrum.csv".into(),
            text,
            Some(("wavelength [nm]", "signal", using)),
        );
    }

    if scenario.outputs.contains(&Output::Summary) {
        add(
            &mut report,
            "summary.csv".into(),
            summary_table(&comments, &summary),
            None,
        );
    }
    Ok(report)
}

type AddFn<'a> = dyn FnMut(&mut RunReport, String, String, Option<(&str, &str, &str)>) + 'a;

#[allow(clippy::too_many_arguments)]
fn band_metrics(
    scenario: &Scenario,
    media: &MediaSet,
    device: &QpmDevice,
    amp: &SpectralAmplitude,
    omega_c: f64,
    opts: &RunOptions,
    comments: &[String],
    summary: &mut Summary,
    report: &mut RunReport,
    add: &mut AddFn<'_>,
) -> CliResult<()> {
    let th = scenario.thresholds;
    let bw = bandwidth_thz(amp, th.bandwidth_fraction)?;
    let (short, long) = band_edges(amp, th.edge_fraction)?;
    summary.push("bandwidth", bw, "THz");
    summary.push("edge_short", short, "nm");
    summary.push("edge_long", long, "nm");
    summary.push("photon_number", amp.integrated_photon_number(), "");
    summary.push("flagged_points", amp.flagged_count() as f64, "");

    let curve = spectral_phase_curve(device, &amp.omega, &amp.geometry)?;
    let device_gdd = measure_gdd(&curve, omega_c)?;
    summary.push("device_gdd", device_gdd, "fs^2");

    if scenario.outputs.contains(&Output::Spectrum) {
        let text = render(|buf| amp.write_csv(buf, comments))?;
        add(
            report,
            "spectrum.csv".into(),
            text,
            Some(("wavelength [nm]", "|psi|^2/2pi", "2:5")),
        );
    }
    if scenario.outputs.contains(&Output::SpectralPhase) {
        let text = render(|buf| curve.write_csv(buf, comments))?;
        add(
            report,
            "spectral_phase.csv".into(),
            text,
            Some(("omega [rad/fs]", "phase [rad]", "1:2")),
        );
    }
    if !scenario.outputs.contains(&Output::SfgTrace) {
        return Ok(());
    }

    let transform = TransformOptions {
        zero_pad: scenario.correlation.zero_pad,
        spot_check_seed: if opts.seedless { None } else { Some(DEFAULT_SEED) },
        spot_checks: DEFAULT_SPOT_CHECKS,
    };
    let nu_c = omega_to_thz(device.degenerate_omega());
    let mut seen: Vec<&str> = Vec::new();
    for spec in &scenario.compensators {
        let comp = spec.build(media, amp, omega_c, device_gdd)?;
        let repeats = seen.iter().filter(|n| **n == comp.name()).count();
        seen.push(comp.name());
        let label = match repeats {
            0 => comp.name().to_string(),
            k => format!("{}{}", comp.name(), k + 1),
        };
        if let Compensator::PrismPair(p) = &comp {
            summary.push(format!("{label}_separation"), p.separation * 1e-3, "mm");
        }
        let filtered = apply_compensator(&comp, amp)?;
        for scheme in schemes(scenario.correlation.scheme) {
            let trace: CorrelationTrace = match *scheme {
                "collinear" => sfg_collinear(&filtered, device.pump_omega(), &transform)?,
                _ => sfg_noncollinear(&filtered, &transform)?,
            };
            let width = trace.fwhm(scenario.correlation.width_mode)?;
            summary.push(format!("fwhm_{label}_{scheme}"), width, "fs");
            summary.push(format!("cycles_{label}_{scheme}"), cycles(width, nu_c), "");
            let shown = match scenario.correlation.trace_window_fs {
                Some(w) => trace.window(w),
                None => trace,
            };
            let text = render(|buf| shown.write_csv(buf, comments))?;
            add(
                report,
                format!("sfg_trace_{label}_{scheme}.csv"),
                text,
                Some(("delay [fs]", "R", "1:2")),
            );
        }
    }
    Ok(())
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

//! Small numerical helpers shared by the scans and transforms.

use crate::error::{Error, Result};

/// Uniform grid `start + i * step`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && start.is_finite()) || len < 2 {
            return Err(Error::Grid(format!(
                "bad uniform grid: start {start}, step {step}, {len} points"
            )));
        }
        Ok(UniformGrid { start, step, len })
    }

    /// `n` points spanning `[lo, hi]` inclusive.
    pub fn spanning(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(hi > lo) || n < 2 {
            return Err(Error::Grid(format!("cannot span [{lo}, {hi}] with {n} points")));
        }
        UniformGrid::new(lo, (hi - lo) / (n - 1) as f64, n)
    }

    pub fn at(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn end(&self) -> f64 {
        self.at(self.len - 1)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.at(i)).collect()
    }

    /// Recovers the grid from samples, failing unless the spacing is uniform to `1e-9` relative.
    pub fn detect(x: &[f64]) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::Grid("need at least two samples".into()));
        }
        let step = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
        if !(step > 0.0) {
            return Err(Error::NonUniformGrid);
        }
        for (i, &xi) in x.iter().enumerate() {
            if (xi - (x[0] + step * i as f64)).abs() > 1e-9 * step.max(x[0].abs() * 1e-6) {
                return Err(Error::NonUniformGrid);
            }
        }
        UniformGrid::new(x[0], step, x.len())
    }
}

/// Abscissae of the outermost points where `y` crosses `level`, linearly interpolated.
/// `None` if `y` never reaches `level`; fails if the crossing would lie beyond either end.
pub fn outermost_crossings(x: &[f64], y: &[f64], level: f64) -> Result<Option<(f64, f64)>> {
    let Some(first) = y.iter().position(|&v| v >= level) else {
        return Ok(None);
    };
    let last = y.iter().rposition(|&v| v >= level).expect("first exists");
    if first == 0 || last == y.len() - 1 {
        return Err(Error::Grid(format!(
            "level {level:e} is still exceeded at the grid boundary"
        )));
    }
    Ok(Some((
        crossing(x[first - 1], x[first], y[first - 1], y[first], level),
        crossing(x[last], x[last + 1], y[last], y[last + 1], level),
    )))
}

pub(crate) fn crossing(x0: f64, x1: f64, y0: f64, y1: f64, level: f64) -> f64 {
    if y1 == y0 {
        return 0.5 * (x0 + x1);
    }
    x0 + (level - y0) * (x1 - x0) / (y1 - y0)
}

/// Trapezoid rule on a uniform grid.
pub fn trapezoid(step: f64, y: &[f64]) -> f64 {
    match y.len() {
        0 | 1 => 0.0,
        n => step * (y.iter().sum::<f64>() - 0.5 * (y[0] + y[n - 1])),
    }
}

/// Composite Simpson rule on `y.len()` uniformly spaced samples (at least 3).
/// Even sample counts close the last three intervals with the 3/8 rule.
pub fn simpson(step: f64, y: &[f64]) -> f64 {
    let n = y.len();
    assert!(n >= 3, "simpson needs at least three samples");
    let simpson13 = |y: &[f64]| {
        let m = y.len() - 1;
        let mut s = y[0] + y[m];
        for (i, v) in y.iter().enumerate().take(m).skip(1) {
            s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        s * step / 3.0
    };
    if n % 2 == 1 {
        return simpson13(y);
    }
    let tail = &y[n - 4..];
    let three_eighths = 3.0 * step / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3]);
    if n == 4 {
        three_eighths
    } else {
        simpson13(&y[..n - 3]) + three_eighths
    }
}

/// Removes `2 pi` jumps between neighbours.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    for (i, &p) in wrapped.iter().enumerate() {
        if i > 0 {
            let d = p - wrapped[i - 1];
            offset -= tau * (d / tau).round();
        }
        out.push(p + offset);
    }
    out
}

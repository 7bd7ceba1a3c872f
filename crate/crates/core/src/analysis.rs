//! Operational readouts built on sampled observables.
//!
//! `fringe_scan` recovers the operational contrast `(I_max − I_min)/(I_max +
//! I_min)` from intensity samples on a uniform fringe-phase grid; for a
//! sinusoidal fringe sampled at `n` points the grid quantization
//! underestimates the contrast by at most `π²/(2n²)` of the modulated
//! amplitude ratio, so 4096 points resolve contrasts to better than `1e-6`.
//!
//! `detect_revivals` reads a contrast curve, separating three regimes: flat
//! within accumulation noise (time independent), collapsed, and revived.

use crate::error::{Error, Result};
use crate::series::VisibilityCurve;

/// Contrast level above which a local maximum counts as a revival.
pub const REVIVAL_THRESHOLD: f64 = 0.99;

/// Flatness margin, in units of the certified truncation bound, below which
/// a curve is reported as time independent.
const FLATNESS_MARGIN: f64 = 10.0;

/// Intensity samples over one fringe period and the contrast they imply.
#[derive(Debug, Clone)]
pub struct FringeScan {
    /// Fringe phases `Δ_j = 2πj/n`, `j = 0..n`.
    pub delta_grid: Vec<f64>,
    pub i_values: Vec<f64>,
    pub i_max: f64,
    pub i_min: f64,
    /// Operational contrast `(I_max − I_min)/(I_max + I_min)`.
    pub v_op: f64,
}

/// Samples `intensity` on the uniform fringe-phase grid and reports the
/// operational contrast.
///
/// `n_points ≥ 8` is a precondition; fewer points cannot bracket a fringe.
/// Errors with `ZeroIntensity` when the samples carry no light at all.
pub fn fringe_scan<F: Fn(f64) -> f64>(intensity: F, n_points: usize) -> Result<FringeScan> {
    assert!(n_points >= 8, "fringe scan needs at least 8 points, got {n_points}");
    let step = std::f64::consts::TAU / n_points as f64;
    let mut delta_grid = Vec::with_capacity(n_points);
    let mut i_values = Vec::with_capacity(n_points);
    let mut i_max = f64::NEG_INFINITY;
    let mut i_min = f64::INFINITY;
    for j in 0..n_points {
        let delta = step * j as f64;
        let i = intensity(delta);
        if !i.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "intensity at Δ = {delta} is not finite: {i}"
            )));
        }
        i_max = i_max.max(i);
        i_min = i_min.min(i);
        delta_grid.push(delta);
        i_values.push(i);
    }
    let total = i_max + i_min;
    if total == 0.0 {
        return Err(Error::ZeroIntensity);
    }
    Ok(FringeScan {
        delta_grid,
        i_values,
        i_max,
        i_min,
        v_op: (i_max - i_min) / total,
    })
}

/// Collapse-and-revival structure read off a contrast curve.
#[derive(Debug, Clone)]
pub struct RevivalReport {
    /// Times of local contrast maxima above the revival threshold.
    pub revival_times: Vec<f64>,
    /// Smallest sampled contrast.
    pub collapse_floor: f64,
    /// Mean spacing of detected revivals; `None` with fewer than two.
    pub estimated_period: Option<f64>,
    /// Whether the curve is flat to within accumulation noise, as for
    /// profiles whose phase exponent vanishes identically.
    pub time_independent: bool,
    /// Worst time resolution of the grid: the largest consecutive spacing.
    pub timing_uncertainty: f64,
}

/// Scans a contrast curve for revivals above `threshold`.
///
/// A curve whose total variation stays within a small multiple of its own
/// certified truncation bound carries no time structure to report; it is
/// flagged `time_independent` and yields no revivals rather than a spurious
/// wall-to-wall peak list. Requires at least two points.
pub fn detect_revivals(curve: &VisibilityCurve, threshold: f64) -> RevivalReport {
    let n = curve.points.len();
    assert!(n >= 2, "revival detection needs at least two points, got {n}");
    let vs: Vec<f64> = curve.points.iter().map(|p| p.v_abs).collect();
    let bound = curve
        .points
        .iter()
        .map(|p| p.truncation_bound)
        .fold(0.0, f64::max);
    let v_max = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let v_min = vs.iter().copied().fold(f64::INFINITY, f64::min);
    let timing_uncertainty = curve
        .points
        .windows(2)
        .map(|w| w[1].t - w[0].t)
        .fold(0.0, f64::max);

    let time_independent = (v_max - v_min) < FLATNESS_MARGIN * bound;
    if time_independent {
        return RevivalReport {
            revival_times: Vec::new(),
            collapse_floor: v_min,
            estimated_period: None,
            time_independent: true,
            timing_uncertainty,
        };
    }

    let mut revival_times = Vec::new();
    for i in 0..n {
        let rising = i == 0 || vs[i] > vs[i - 1];
        let falling = i == n - 1 || vs[i] >= vs[i + 1];
        if rising && falling && vs[i] > threshold {
            revival_times.push(curve.points[i].t);
        }
    }
    let estimated_period = if revival_times.len() >= 2 {
        let span = revival_times[revival_times.len() - 1] - revival_times[0];
        Some(span / (revival_times.len() - 1) as f64)
    } else {
        None
    };
    RevivalReport {
        revival_times,
        collapse_floor: v_min,
        estimated_period,
        time_independent: false,
        timing_uncertainty,
    }
}

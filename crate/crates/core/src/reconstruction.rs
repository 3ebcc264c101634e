//! CLEAN-style chirp reconstruction from jittered samples.
//!
//! The uniqueness mechanism — a matched probe recovers `B_j` while every
//! off-match average decays — becomes an algorithm by iterating
//!
//! ```text
//! grid → detect peak → refine probe → estimate amplitude → deflate
//! ```
//!
//! until the detection grid's peak falls below the threshold `ε` or the
//! component budget is exhausted. Deflation keeps each step a single
//! correlator evaluation per probe, mirroring the one-coefficient-at-a-
//! time bound `|B_j| ≤ ε`; there is deliberately no joint least-squares
//! polish.
//!
//! Windows and grids: the correlator main lobe at half-window `L` has
//! width `~π/x_max` in ω and `~π/x_max²` in `c` with `x_max = (L+1)λ`, so
//! a full-range grid that resolves it at large `L` is astronomically
//! large. Detection therefore runs on a small centered sub-window
//! (`detect_half_window`, sharing points with the full set by keyed
//! generation), and the detected probe is walked up a ×4 window ladder,
//! re-refined at each stage, until the full window sharpens it to its
//! final accuracy. Grid steps obey `Δω ≤ π/(2x_max)`, `Δc ≤ π/(2x_max²)`
//! at the window that evaluates them, so the main lobe spans at least two
//! cells in each axis.
//!
//! `ε` lives on the correlator scale (max residual average over the
//! grid), not the sup-norm scale of the underlying approximation space;
//! the two differ by constants this crate does not quantify.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::chirp_model::{CanonicalChirp, DEFAULT_MERGE_TOL};
use crate::correlator::{chirp_correlator, evaluate_grid, Axis, CorrelatorGrid, ProbePoint};
use crate::sampling::SampleSet;
use crate::{Error, Result};

/// Default detection sub-window half-width.
pub const DEFAULT_DETECT_HALF_WINDOW: u32 = 64;

/// Default final bracket-shrink factor for probe refinement. The
/// amplitude estimate inherits a phase error `≈ δc · mean(x²)` from a
/// rate offset `δc`, and `mean(x²) ~ L²/3` is large at desk windows, so
/// the final bracket has to land deep inside the main lobe.
pub const DEFAULT_REFINE_TOL: f64 = 1.0 / 1024.0;

/// Bracket-shrink factor used on intermediate ladder stages, where only
/// the next stage's capture range matters.
const STAGE_REFINE_TOL: f64 = 1.0 / 16.0;

/// Configuration of the reconstruction loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Probe search range in ω (rad per x-unit).
    pub omega_range: (f64, f64),
    /// Probe search range in `c` (rad per x-unit²).
    pub rate_range: (f64, f64),
    /// Full half-window `L`; must match the sample set.
    pub half_window: u32,
    /// Residual threshold ε on the correlator scale.
    pub epsilon: f64,
    pub max_components: usize,
    /// Final bracket width as a fraction of the detection cell.
    pub refine_tol: f64,
    /// Half-width of the detection sub-window.
    pub detect_half_window: u32,
    /// Collision tolerance for merging refined components.
    pub merge_tol: f64,
}

impl DetectionConfig {
    pub fn new(
        omega_range: (f64, f64),
        rate_range: (f64, f64),
        half_window: u32,
        epsilon: f64,
    ) -> Result<Self> {
        let config = Self {
            omega_range,
            rate_range,
            half_window,
            epsilon,
            max_components: 8,
            refine_tol: DEFAULT_REFINE_TOL,
            detect_half_window: DEFAULT_DETECT_HALF_WINDOW,
            merge_tol: DEFAULT_MERGE_TOL,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_range.1 > self.omega_range.0) || !(self.rate_range.1 > self.rate_range.0) {
            return Err(Error::Config(format!(
                "degenerate probe ranges omega {:?}, rate {:?}",
                self.omega_range, self.rate_range
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_components < 1 {
            return Err(Error::Config("max_components must be at least 1".into()));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol <= 1.0) {
            return Err(Error::Config(format!(
                "refine_tol must lie in (0, 1], got {}",
                self.refine_tol
            )));
        }
        if self.detect_half_window < 1 {
            return Err(Error::Config("detect_half_window must be at least 1".into()));
        }
        Ok(())
    }
}

/// Extracted components plus the convergence record.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    /// Components in extraction order, collisions merged.
    pub components: Vec<CanonicalChirp>,
    /// Final detection-grid peak magnitude.
    pub residual_peak: f64,
    pub epsilon: f64,
    /// Deflation iterations performed.
    pub iterations: usize,
    /// `true` iff `residual_peak ≤ epsilon`.
    pub converged: bool,
    /// Detection-grid peak before each iteration and after the last.
    pub residual_trace: Vec<f64>,
}

/// Axes satisfying the main-lobe resolution rule `Δω ≤ π/(2 x_max)`,
/// `Δc ≤ π/(2 x_max²)` with `x_max = (L+1)λ`.
pub fn detection_axes(
    omega_range: (f64, f64),
    rate_range: (f64, f64),
    half_window: u32,
    lambda: f64,
) -> Result<(Axis, Axis)> {
    let x_max = (half_window as f64 + 1.0) * lambda;
    let omega_axis = Axis::from_range(omega_range.0, omega_range.1, FRAC_PI_2 / x_max)?;
    let rate_axis = Axis::from_range(rate_range.0, rate_range.1, FRAC_PI_2 / (x_max * x_max))?;
    Ok((omega_axis, rate_axis))
}

/// Cell of maximal modulus; ties resolved toward the lowest ω index,
/// then the lowest `c` index.
pub fn detect_peak(grid: &CorrelatorGrid) -> (ProbePoint, f64) {
    let (i, j, magnitude) = grid.peak();
    (grid.probe(i, j), magnitude)
}

/// Sharpen a probe by derivative-free coordinate descent on `|A_L|`.
///
/// Starting from brackets `cell = (w_ω, w_c)`, candidates at
/// `±w, ±w/2` per coordinate are accepted only on strict improvement, and
/// the brackets halve until both fall below `refine_tol · cell`. The
/// objective never decreases across accepted steps; on a flat objective
/// (e.g. `f ≡ 0`) or when `initial` is already the peak, the input is
/// returned unchanged.
pub fn refine_peak(
    values: &[Complex64],
    samples: &SampleSet,
    initial: ProbePoint,
    cell: (f64, f64),
    refine_tol: f64,
) -> Result<ProbePoint> {
    let objective = |p: &ProbePoint| -> Result<f64> {
        let v = chirp_correlator(values, samples, p)?.norm();
        if !v.is_finite() {
            return Err(Error::Numerical(format!(
                "correlator magnitude not finite at probe ({}, {})",
                p.omega, p.rate
            )));
        }
        Ok(v)
    };

    let mut current = initial;
    let mut best = objective(&current)?;
    let (mut w_omega, mut w_rate) = cell;
    let target = (cell.0 * refine_tol, cell.1 * refine_tol);

    while w_omega > target.0 || w_rate > target.1 {
        for _sweep in 0..4 {
            let mut improved = false;
            for coord in 0..2 {
                let width = if coord == 0 { w_omega } else { w_rate };
                for &d in &[-1.0, -0.5, 0.5, 1.0] {
                    let candidate = if coord == 0 {
                        ProbePoint::new(current.omega + d * width, current.rate)
                    } else {
                        ProbePoint::new(current.omega, current.rate + d * width)
                    };
                    let value = objective(&candidate)?;
                    if value > best {
                        best = value;
                        current = candidate;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        w_omega *= 0.5;
        w_rate *= 0.5;
    }
    Ok(current)
}

/// Amplitude estimate at a probe: the matched correlator value.
pub fn estimate_amplitude(
    values: &[Complex64],
    samples: &SampleSet,
    probe: &ProbePoint,
) -> Result<Complex64> {
    chirp_correlator(values, samples, probe)
}

/// Subtract one estimated component from the values pointwise.
pub fn deflate(
    values: &[Complex64],
    component: &CanonicalChirp,
    samples: &SampleSet,
) -> Result<Vec<Complex64>> {
    if values.len() != samples.len() {
        return Err(Error::Alignment {
            values: values.len(),
            samples: samples.len(),
        });
    }
    Ok(values
        .iter()
        .zip(&samples.points)
        .map(|(v, p)| v - component.evaluate(p.location))
        .collect())
}

/// Centered sub-slice of full-window values at half-width `l`.
fn window_slice(values: &[Complex64], full: u32, l: u32) -> &[Complex64] {
    let center = full as usize;
    &values[center - l as usize..=center + l as usize]
}

/// Run the full detect/refine/estimate/deflate loop.
///
/// Non-convergence (budget exhausted above ε) is a report state, not an
/// error.
pub fn reconstruct(
    values: &[Complex64],
    samples: &SampleSet,
    config: &DetectionConfig,
) -> Result<ReconstructionReport> {
    config.validate()?;
    if values.len() != samples.len() {
        return Err(Error::Alignment {
            values: values.len(),
            samples: samples.len(),
        });
    }
    if samples.config.half_window != config.half_window {
        return Err(Error::Config(format!(
            "sample half-window {} does not match config half-window {}",
            samples.config.half_window, config.half_window
        )));
    }

    let lambda = samples.config.lambda;
    let l_full = config.half_window;
    let l_detect = config.detect_half_window.min(l_full);
    let (omega_axis, rate_axis) =
        detection_axes(config.omega_range, config.rate_range, l_detect, lambda)?;
    let detect_samples = samples.window(l_detect);

    let mut residual = values.to_vec();
    let mut extracted: Vec<CanonicalChirp> = Vec::new();
    let mut trace: Vec<f64> = Vec::new();

    let (residual_peak, converged) = loop {
        let detect_values = window_slice(&residual, l_full, l_detect);
        let grid = evaluate_grid(detect_values, &detect_samples, &omega_axis, &rate_axis)?;
        let (coarse_probe, magnitude) = detect_peak(&grid);
        trace.push(magnitude);
        if magnitude <= config.epsilon {
            break (magnitude, true);
        }
        if extracted.len() >= config.max_components {
            break (magnitude, false);
        }

        // Walk the probe up the window ladder, re-refining at each stage
        // with brackets spanning the previous stage's uncertainty.
        let mut probe = coarse_probe;
        let mut l_stage = l_detect;
        loop {
            let stage_samples = samples.window(l_stage);
            let stage_values = window_slice(&residual, l_full, l_stage);
            let x_max = (l_stage as f64 + 1.0) * lambda;
            let bracket = (3.0 * FRAC_PI_2 / x_max, 3.0 * FRAC_PI_2 / (x_max * x_max));
            let tol = if l_stage == l_full {
                config.refine_tol
            } else {
                STAGE_REFINE_TOL
            };
            probe = refine_peak(stage_values, &stage_samples, probe, bracket, tol)?;
            if l_stage == l_full {
                break;
            }
            l_stage = l_stage.saturating_mul(4).min(l_full);
        }

        let amplitude = estimate_amplitude(&residual, samples, &probe)?;
        let component = CanonicalChirp::new(amplitude, probe.omega, probe.rate);
        residual = deflate(&residual, &component, samples)?;
        extracted.push(component);
    };

    let iterations = extracted.len();
    Ok(ReconstructionReport {
        components: merge_components(extracted, config.merge_tol),
        residual_peak,
        epsilon: config.epsilon,
        iterations,
        converged,
        residual_trace: trace,
    })
}

/// Merge components whose `(ω₀, c)` collide within `tol`, preserving
/// extraction order; exact cancellations are dropped.
fn merge_components(components: Vec<CanonicalChirp>, tol: f64) -> Vec<CanonicalChirp> {
    let mut merged: Vec<CanonicalChirp> = Vec::with_capacity(components.len());
    for c in components {
        match merged
            .iter_mut()
            .find(|m| (m.omega0 - c.omega0).abs() < tol && (m.rate - c.rate).abs() < tol)
        {
            Some(m) => m.amplitude += c.amplitude,
            None => merged.push(c),
        }
    }
    merged.retain(|c| c.amplitude.norm_sqr() != 0.0);
    merged
}

/// Declare `f ≡ 0` at level ε: true iff the grid's peak magnitude is at
/// most ε. Axes should resolve the main lobe at the samples' window,
/// e.g. from [`detection_axes`] at the same half-width.
pub fn zero_test(
    values: &[Complex64],
    samples: &SampleSet,
    omega_axis: &Axis,
    rate_axis: &Axis,
    epsilon: f64,
) -> Result<bool> {
    if !(epsilon > 0.0) {
        return Err(Error::Config(format!("epsilon must be positive, got {epsilon}")));
    }
    let grid = evaluate_grid(values, samples, omega_axis, rate_axis)?;
    Ok(grid.max_abs() <= epsilon)
}

//! The jittered sampling point process and its circle-orbit diagnostics.
//!
//! Samples live at `x_n = nλ + X_n` for `n = −L … L`, with `X_n`
//! independent uniform on `[0, λ)` drawn from the keyed counter generator
//! in [`crate::rng`], so a `SampleSet` is a pure function of its
//! [`SamplingConfig`] and windows of different half-width share points.
//!
//! The ergodic behaviour of chirp averages over these samples is governed
//! by the wrapped phase
//!
//! ```text
//! y_n = (ω/2π)·x_n + (c/2π)·x_n²   (mod 1),
//! ```
//!
//! a random dynamical system on the circle. Once the per-step interval
//! wraps a full turn — past `n* = (2π − ω)/(2c) − 1/2` on the unit
//! lattice — the density of `y_n` deviates from uniform by at most
//! `Δρ_n = 2π/√(ω² + 4c(ωn + cn²))`, which is `O(1/n)`. Those two closed
//! forms plus a Monte Carlo histogram estimator are exposed here as
//! diagnostics; the correlator module builds the actual averages.
//!
//! The closed forms assume the unit lattice; for `λ ≠ 1` the substitution
//! `x = λx′` rescales the probe to `(ωλ, cλ²)`, which is applied before
//! evaluating them. Negative chirp rates are reduced to positive ones via
//! the `y → 1 − y` mirror symmetry.

use std::f64::consts::TAU;

use crate::rng::{stream, KeyStream};
use crate::{Error, KahanSum, Result};

/// Configuration of the jittered point process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    /// Lattice spacing λ in x-units; the mean sampling rate is `1/λ`.
    pub lambda: f64,
    /// Master seed; jitter draws are keyed `(seed, JITTER, n)`.
    pub seed: u64,
    /// Half window `L`; indices run `−L … L`.
    pub half_window: u32,
}

impl SamplingConfig {
    pub fn new(lambda: f64, seed: u64, half_window: u32) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Config(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self {
            lambda,
            seed,
            half_window,
        })
    }
}

/// One jittered sample `x_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub index: i64,
    pub location: f64,
}

/// The realized point process over the window `−L … L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub config: SamplingConfig,
    pub points: Vec<SamplePoint>,
}

/// Draw the sample set for `config`; bit-identical for identical configs.
pub fn generate_samples(config: &SamplingConfig) -> SampleSet {
    SampleSet::with_jitter(config, |stream, n| config.lambda * stream.unit_at(n))
}

impl SampleSet {
    /// Build a sample set with an explicit jitter rule `X_n = f(stream, n)`.
    ///
    /// `generate_samples` passes the uniform rule; tests use degenerate
    /// rules (e.g. `X_n = λ/2`) to pin closed forms.
    pub fn with_jitter(config: &SamplingConfig, jitter: impl Fn(&KeyStream, i64) -> f64) -> Self {
        let stream = KeyStream::new(config.seed, stream::JITTER);
        let l = config.half_window as i64;
        let lambda = config.lambda;
        let points = (-l..=l)
            .map(|n| {
                let base = n as f64 * lambda;
                let mut x = base + jitter(&stream, n);
                // At large |n| the sum can round onto the next lattice point.
                let next = (n + 1) as f64 * lambda;
                if x >= next {
                    x = next.next_down();
                }
                if x < base {
                    x = base;
                }
                SamplePoint { index: n, location: x }
            })
            .collect();
        Self {
            config: *config,
            points,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Jitter `X_n = x_n − nλ` of the k-th stored point.
    pub fn jitter(&self, k: usize) -> f64 {
        let p = self.points[k];
        p.location - p.index as f64 * self.config.lambda
    }

    /// The centered sub-window of half-width `l ≤ L`. Identical to
    /// regenerating at `l` because draws are keyed per index.
    pub fn window(&self, l: u32) -> SampleSet {
        assert!(
            l <= self.config.half_window,
            "window {l} exceeds half-width {}",
            self.config.half_window
        );
        let full = self.config.half_window as usize;
        let lo = full - l as usize;
        let hi = full + l as usize;
        SampleSet {
            config: SamplingConfig {
                half_window: l,
                ..self.config
            },
            points: self.points[lo..=hi].to_vec(),
        }
    }
}

/// Wrapped circle phase of one sample for probe `(ω, c)`.
#[inline]
pub fn circle_value(omega: f64, rate: f64, x: f64) -> f64 {
    let t = (omega / TAU) * x + (rate / TAU) * (x * x);
    let y = t - t.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Orbit and deviation diagnostics of the circle system at one probe.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleDiagnostics {
    pub omega: f64,
    pub rate: f64,
    /// `y_n ∈ [0, 1)` per sample, in window order.
    pub orbit: Vec<f64>,
    /// `n*` on the unit lattice (rescaled probe); `+∞` when `c = 0`
    /// (constant-length steps never start wrapping).
    pub wrap_threshold: f64,
    /// `Δρ_n` per sample; `+∞` where the closed form is undefined.
    pub deviation_bounds: Vec<f64>,
}

/// Compute the circle orbit and per-index deviation bounds.
///
/// Requires `(ω, c) ≠ (0, 0)`. The orbit uses the raw probe; the
/// threshold and bounds use the unit-lattice rescaling `(ωλ, cλ²)` with
/// negative rates mirrored to positive.
pub fn circle_orbit(samples: &SampleSet, omega: f64, rate: f64) -> Result<CircleDiagnostics> {
    if omega == 0.0 && rate == 0.0 {
        return Err(Error::InvalidProbe);
    }
    let orbit: Vec<f64> = samples
        .points
        .iter()
        .map(|p| circle_value(omega, rate, p.location))
        .collect();

    let lambda = samples.config.lambda;
    let (mut omega_eff, mut rate_eff) = (omega * lambda, rate * lambda * lambda);
    if rate_eff < 0.0 {
        omega_eff = -omega_eff;
        rate_eff = -rate_eff;
    }
    let threshold = if rate_eff > 0.0 {
        wrap_threshold(omega_eff, rate_eff)?
    } else {
        f64::INFINITY
    };
    let deviation_bounds = samples
        .points
        .iter()
        .map(|p| density_deviation_bound(omega_eff, rate_eff, p.index).unwrap_or(f64::INFINITY))
        .collect();

    Ok(CircleDiagnostics {
        omega,
        rate,
        orbit,
        wrap_threshold: threshold,
        deviation_bounds,
    })
}

/// Index `n* = (2π − ω)/(2c) − 1/2` past which the per-step phase
/// interval wraps at least one full turn (unit lattice, `c > 0`).
pub fn wrap_threshold(omega: f64, rate: f64) -> Result<f64> {
    if rate <= 0.0 {
        return Err(Error::Domain(format!(
            "wrap threshold needs c > 0, got {rate}; reduce negative rates by mirror symmetry"
        )));
    }
    Ok((TAU - omega) / (2.0 * rate) - 0.5)
}

/// Maximum deviation from uniformity of the wrapped density at step `n`:
/// `Δρ_n = 2π / √(ω² + 4c(ωn + cn²))`, which is `O(1/n)` for `c > 0`.
pub fn density_deviation_bound(omega: f64, rate: f64, n: i64) -> Result<f64> {
    let nf = n as f64;
    let radicand = omega * omega + 4.0 * rate * (omega * nf + rate * nf * nf);
    if radicand <= 0.0 {
        return Err(Error::Domain(format!(
            "deviation bound undefined: omega^2 + 4c(omega n + c n^2) = {radicand} <= 0"
        )));
    }
    Ok(TAU / radicand.sqrt())
}

/// Histogram estimate of the sup deviation of the density of `y_n` from 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    /// `max_bin |ρ̂ − 1|`.
    pub deviation: f64,
    pub trials: u64,
    pub bins: usize,
}

/// Bin count for density estimation; balances bias vs noise at 1e5 trials.
pub const DENSITY_BINS: usize = 50;

/// Monte Carlo estimate of `sup_y |ρ_n(y) − 1|` at step `n` of the unit
/// lattice: fresh draws `x = n + X`, `X ~ U[0, 1)`, keyed by
/// `(seed, DENSITY, trial)`.
pub fn empirical_density_deviation(
    omega: f64,
    rate: f64,
    n: i64,
    trials: u64,
    seed: u64,
) -> DensityEstimate {
    assert!(trials > 0, "need at least one trial");
    let stream = KeyStream::new(seed, stream::DENSITY);
    let mut counts = [0u64; DENSITY_BINS];
    for t in 0..trials {
        let x = n as f64 + stream.unit(t);
        let y = circle_value(omega, rate, x);
        let bin = ((y * DENSITY_BINS as f64) as usize).min(DENSITY_BINS - 1);
        counts[bin] += 1;
    }
    let scale = DENSITY_BINS as f64 / trials as f64;
    let deviation = counts
        .iter()
        .map(|&c| (c as f64 * scale - 1.0).abs())
        .fold(0.0, f64::max);
    DensityEstimate {
        deviation,
        trials,
        bins: DENSITY_BINS,
    }
}

/// Mean and variance of the stored jitters; used by the moment checks.
pub fn jitter_moments(samples: &SampleSet) -> (f64, f64) {
    let mut sum = KahanSum::new();
    let mut sq = KahanSum::new();
    for k in 0..samples.len() {
        let j = samples.jitter(k);
        sum.add(j);
        sq.add(j * j);
    }
    let n = samples.len() as f64;
    let mean = sum.total() / n;
    (mean, sq.total() / n - mean * mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_stay_on_their_lattice_cells() {
        let config = SamplingConfig::new(1.0, 7, 2).unwrap();
        let set = generate_samples(&config);
        assert_eq!(set.len(), 5);
        for (k, p) in set.points.iter().enumerate() {
            assert_eq!(p.index, k as i64 - 2);
            assert!(p.location >= p.index as f64 && p.location < (p.index + 1) as f64);
        }
    }

    #[test]
    fn midpoint_jitter_is_exact() {
        let config = SamplingConfig::new(1.0, 0, 10).unwrap();
        let set = SampleSet::with_jitter(&config, |_, _| 0.5);
        for p in &set.points {
            assert_eq!(p.location, p.index as f64 + 0.5);
        }
    }

    #[test]
    fn regeneration_and_windowing_are_bit_identical() {
        let config = SamplingConfig::new(0.75, 99, 1000).unwrap();
        let a = generate_samples(&config);
        let b = generate_samples(&config);
        assert_eq!(a, b);

        let small = SamplingConfig::new(0.75, 99, 120).unwrap();
        assert_eq!(a.window(120), generate_samples(&small));
    }

    #[test]
    fn jitter_moments_match_uniform() {
        let config = SamplingConfig::new(1.0, 12345, 50_000).unwrap();
        let set = generate_samples(&config);
        let (mean, var) = jitter_moments(&set);
        assert!((0.496..=0.504).contains(&mean), "mean {mean}");
        assert!((0.080..=0.087).contains(&var), "var {var}");
    }

    #[test]
    fn pure_rotation_orbit_reduces_to_jitter() {
        let config = SamplingConfig::new(1.0, 3, 1000).unwrap();
        let set = generate_samples(&config);
        let diag = circle_orbit(&set, TAU, 0.0).unwrap();
        for (k, &y) in diag.orbit.iter().enumerate() {
            assert!((y - set.jitter(k)).abs() < 1e-9, "index {k}");
        }
        assert!(diag.wrap_threshold.is_infinite());
    }

    #[test]
    fn midpoint_square_orbit_is_constant_quarter() {
        let config = SamplingConfig::new(1.0, 0, 100).unwrap();
        let set = SampleSet::with_jitter(&config, |_, _| 0.5);
        let diag = circle_orbit(&set, 0.0, TAU).unwrap();
        for &y in &diag.orbit {
            assert!((y - 0.25).abs() < 1e-10, "y = {y}");
        }
    }

    #[test]
    fn orbit_rejects_null_probe() {
        let config = SamplingConfig::new(1.0, 0, 10).unwrap();
        let set = generate_samples(&config);
        assert!(matches!(circle_orbit(&set, 0.0, 0.0), Err(Error::InvalidProbe)));
    }

    #[test]
    fn orbit_is_near_uniform_in_the_wrapping_regime() {
        let config = SamplingConfig::new(1.0, 21, 10_000).unwrap();
        let set = generate_samples(&config);
        let diag = circle_orbit(&set, 1.0, 0.3).unwrap();
        let mut sorted = diag.orbit.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let ks = sorted
            .iter()
            .enumerate()
            .map(|(i, &y)| {
                let lo = i as f64 / n;
                let hi = (i + 1) as f64 / n;
                (y - lo).abs().max((hi - y).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.02, "Kolmogorov-Smirnov distance {ks}");
    }

    #[test]
    fn orbit_matches_independent_recomputation() {
        let config = SamplingConfig::new(1.0, 5, 100).unwrap();
        let set = generate_samples(&config);
        let diag = circle_orbit(&set, 2.3, 0.17).unwrap();
        for (p, &y) in set.points.iter().zip(&diag.orbit) {
            // Second code path: reduce the phase itself modulo 2π.
            let theta = 2.3 * p.location + 0.17 * p.location * p.location;
            let y2 = theta.rem_euclid(TAU) / TAU;
            let diff = (y - y2).abs().min(1.0 - (y - y2).abs());
            assert!(diff < 1e-12, "y {y} vs {y2}");
        }
    }

    #[test]
    fn wrap_threshold_closed_forms() {
        use std::f64::consts::PI;
        assert!((wrap_threshold(PI, PI).unwrap() - 0.0).abs() < 1e-15);
        assert!((wrap_threshold(TAU, 1.0).unwrap() + 0.5).abs() < 1e-15);
        let t = wrap_threshold(0.1, 0.01).unwrap();
        assert!((t - ((TAU - 0.1) / 0.02 - 0.5)).abs() < 1e-9);
        assert!((t - 308.659).abs() < 1e-2);
        assert!(wrap_threshold(1.0, 0.0).is_err());
        assert!(wrap_threshold(1.0, -0.2).is_err());
    }

    #[test]
    fn deviation_bound_closed_forms() {
        use std::f64::consts::PI;
        assert!((density_deviation_bound(3.0, 5.0, 0).unwrap() - TAU / 3.0).abs() < 1e-12);
        let v = density_deviation_bound(TAU, PI, 1).unwrap();
        assert!((v - 0.5).abs() < 1e-12, "got {v}");
        assert!(density_deviation_bound(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn deviation_bound_decays_like_reciprocal_n() {
        let n = 10_000;
        let a = density_deviation_bound(1.0, 1.0, n).unwrap();
        let b = density_deviation_bound(1.0, 1.0, 2 * n).unwrap();
        assert!((b / a - 0.5).abs() < 0.01, "ratio {}", b / a);
    }

    #[test]
    fn empirical_deviation_of_exact_uniform_is_histogram_noise() {
        let est = empirical_density_deviation(TAU, 0.0, 0, 100_000, 11);
        assert!(est.deviation <= 0.1, "deviation {}", est.deviation);
    }

    #[test]
    fn empirical_deviation_respects_the_bound() {
        let bound = density_deviation_bound(1.0, 1.0, 100).unwrap();
        let est = empirical_density_deviation(1.0, 1.0, 100, 1_000_000, 17);
        assert!(
            est.deviation <= 2.0 * bound,
            "empirical {} vs bound {bound}",
            est.deviation
        );
    }

    #[test]
    fn empirical_deviation_decreases_along_n() {
        let d10 = empirical_density_deviation(1.0, 1.0, 10, 1_000_000, 23).deviation;
        let d100 = empirical_density_deviation(1.0, 1.0, 100, 1_000_000, 23).deviation;
        let d1000 = empirical_density_deviation(1.0, 1.0, 1000, 1_000_000, 23).deviation;
        assert!(d10 > d100 && d100 > d1000, "{d10} {d100} {d1000}");
    }

    #[test]
    fn empirical_deviation_ordered_by_bound_plus_noise() {
        // Deviation ordering: empirical <= bound + 3 * binomial bin error
        // for c > 0 and n past the wrap threshold.
        let trials = 1_000_000u64;
        let bin_sigma = (DENSITY_BINS as f64 / trials as f64).sqrt();
        for &(omega, rate, n) in &[(1.0, 1.0, 50i64), (0.5, 0.8, 200), (2.0, 0.3, 400)] {
            let nstar = wrap_threshold(omega, rate).unwrap();
            assert!((n as f64) > nstar);
            let bound = density_deviation_bound(omega, rate, n).unwrap();
            let est = empirical_density_deviation(omega, rate, n, trials, 31);
            assert!(
                est.deviation <= bound + 3.0 * bin_sigma,
                "({omega},{rate},{n}): {} vs {bound}",
                est.deviation
            );
        }
    }
}

//! Pass/fail verification harnesses behind the CLI `verify` subcommands.
//!
//! Each harness runs one of the crate's empirical checks end to end and
//! returns a serializable report with an overall `pass` flag; the CLI
//! maps `pass` to the exit code.

use serde::{Deserialize, Serialize};

use crate::correlator::{decay_curve, envelope, ProbePoint};
use crate::frft::{frft_same_grid, FrftOrder, SampledFunction};
use crate::large_deviation::{
    deviation_threshold, monte_carlo_tail, MonteCarloTailSpec, RateFunctionModel,
};
use crate::nonlinear::{log_log_slope, nonlinear_density_deviation};
use crate::rng::{stream, KeyStream};
use crate::chirp_model::PolynomialPhase;
use crate::{Complex64, Result};

/// Decay verification of the ergodic average at one probe.
///
/// Probes with `ω = 0` are outside the proven regime (the limit theorem
/// assumes `ω ≠ 0`); they are evaluated but flagged and fail.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub omega: f64,
    pub rate: f64,
    pub lambda: f64,
    pub half_windows: Vec<u32>,
    pub seeds_used: usize,
    pub mean_abs: Vec<f64>,
    /// `2 · envelope(L, C = 1/2)` per window.
    pub envelope_ceiling: Vec<f64>,
    /// Required bound on the final mean.
    pub threshold: f64,
    pub in_regime: bool,
    pub strictly_decreasing: bool,
    pub within_envelope: bool,
    pub final_below_threshold: bool,
    pub pass: bool,
}

pub fn verify_theorem3(
    omega: f64,
    rate: f64,
    lambda: f64,
    half_windows: &[u32],
    num_seeds: usize,
    seed: u64,
    threshold: f64,
) -> Result<Theorem3Report> {
    let stream = KeyStream::new(seed, stream::SEEDS);
    let seeds: Vec<u64> = (0..num_seeds as u64).map(|k| stream.bits(k)).collect();
    let probe = ProbePoint::new(omega, rate);
    let curve = decay_curve(&probe, lambda, half_windows, &seeds)?;

    let mean_abs: Vec<f64> = curve.entries.iter().map(|e| e.mean_abs).collect();
    let envelope_ceiling: Vec<f64> = half_windows
        .iter()
        .map(|&l| 2.0 * envelope(l, 0.5))
        .collect();
    let in_regime = omega != 0.0;
    let strictly_decreasing = mean_abs.windows(2).all(|w| w[1] < w[0]);
    let within_envelope = mean_abs
        .iter()
        .zip(&envelope_ceiling)
        .all(|(m, e)| m <= e);
    let final_below_threshold = mean_abs.last().is_some_and(|&m| m <= threshold);
    Ok(Theorem3Report {
        omega,
        rate,
        lambda,
        half_windows: half_windows.to_vec(),
        seeds_used: num_seeds,
        mean_abs,
        envelope_ceiling,
        threshold,
        in_regime,
        strictly_decreasing,
        within_envelope,
        final_below_threshold,
        pass: in_regime && strictly_decreasing && within_envelope && final_below_threshold,
    })
}

/// Large-deviation tail check: does the empirical exceedance of
/// `m̂_N + b_N` stay under the `N⁻²` Chernoff bound?
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LdReport {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "C")]
    pub c: f64,
    pub m_n_hat: f64,
    pub b_n: f64,
    /// Chernoff bound at the threshold (= N⁻² by the exact identity).
    pub bound: f64,
    pub empirical: f64,
    pub std_error: f64,
    /// Mean of the index-weighted variant `(1/N) Σ sin(2π n X_n)`,
    /// recorded for comparison with the wrapped-orbit form.
    pub index_weighted_mean: f64,
    pub pass: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn verify_large_deviation(
    n: u64,
    c: f64,
    omega: f64,
    rate: f64,
    index_offset: i64,
    trials: u64,
    seed: u64,
) -> Result<LdReport> {
    let b_n = deviation_threshold(n, c)?;
    // Pilot pass on an independent stream estimates the mean the
    // threshold is centered on.
    let pilot = monte_carlo_tail(&MonteCarloTailSpec {
        omega,
        rate,
        index_offset,
        count: n,
        threshold_y: f64::INFINITY,
        trials,
        seed: KeyStream::new(seed, stream::PILOT).bits(0),
    });
    let m_n_hat = pilot.mean_estimate;

    let est = monte_carlo_tail(&MonteCarloTailSpec {
        omega,
        rate,
        index_offset,
        count: n,
        threshold_y: m_n_hat + b_n,
        trials,
        seed,
    });
    let model = RateFunctionModel::new(n, c, m_n_hat)?;
    let bound = model.chernoff_tail_bound(m_n_hat + b_n).probability;
    Ok(LdReport {
        n,
        c,
        m_n_hat,
        b_n,
        bound,
        empirical: est.empirical_prob,
        std_error: est.std_error,
        index_weighted_mean: est.index_weighted_mean,
        pass: est.empirical_prob <= bound + 3.0 * est.std_error,
    })
}

/// Polynomial-phase density-decay verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonlinearReport {
    pub m: usize,
    pub c: f64,
    pub n_list: Vec<i64>,
    pub empirical: Vec<f64>,
    pub bound: Vec<f64>,
    /// Log-log slope of the empirical deviations vs `n`.
    pub slope: f64,
    /// Expected slope `−(m−1)`; pass requires agreement within ±0.3 and
    /// every deviation under its bound.
    pub expected_slope: f64,
    pub pass: bool,
}

pub fn verify_nonlinear(phase: &PolynomialPhase, n_list: &[i64]) -> Result<NonlinearReport> {
    let mut empirical = Vec::with_capacity(n_list.len());
    let mut bound = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let dev = nonlinear_density_deviation(phase, n)?;
        empirical.push(dev.empirical);
        bound.push(dev.bound);
    }
    let xs: Vec<f64> = n_list.iter().map(|&n| n.abs() as f64).collect();
    let slope = log_log_slope(&xs, &empirical);
    let expected_slope = -((phase.degree() - 1) as f64);
    let under_bound = empirical.iter().zip(&bound).all(|(e, b)| e <= b);
    Ok(NonlinearReport {
        m: phase.degree(),
        c: phase.leading(),
        n_list: n_list.to_vec(),
        empirical,
        bound,
        slope,
        expected_slope,
        pass: (slope - expected_slope).abs() <= 0.3 && under_bound,
    })
}

/// Quadrature self-checks of the fractional transform on the Gaussian.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrftReport {
    pub roundtrip_order: f64,
    pub grid_start: f64,
    pub grid_step: f64,
    pub grid_count: usize,
    /// Max abs error of order 1 against the closed-form transform.
    pub fourier_error: f64,
    /// Max abs error of `F_{−b}∘F_b` against the input.
    pub roundtrip_error: f64,
    /// Max abs error of `F_{1/2}∘F_{1/2}` against `F_1`.
    pub composition_error: f64,
    pub tol_fourier: f64,
    pub tol_roundtrip: f64,
    pub pass: bool,
}

pub fn verify_frft(roundtrip_order: f64, tol_fourier: f64, tol_roundtrip: f64) -> Result<FrftReport> {
    let (start, step, count) = (-10.0, 0.01, 2001usize);
    let gaussian = SampledFunction::from_fn(start, step, count, |t| {
        Complex64::new((-0.5 * t * t).exp(), 0.0)
    })?;

    let order_one = frft_same_grid(&gaussian, &FrftOrder::new(1.0)?)?;
    let fourier_error = order_one
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let z = order_one.grid_point(k);
            (v - Complex64::new((-0.5 * z * z).exp(), 0.0)).norm()
        })
        .fold(0.0, f64::max);

    let fwd = frft_same_grid(&gaussian, &FrftOrder::new(roundtrip_order)?)?;
    let back = frft_same_grid(&fwd, &FrftOrder::new(-roundtrip_order)?)?;
    let roundtrip_error = back
        .values
        .iter()
        .zip(&gaussian.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    let half = FrftOrder::new(0.5)?;
    let twice = frft_same_grid(&frft_same_grid(&gaussian, &half)?, &half)?;
    let composition_error = twice
        .values
        .iter()
        .zip(&order_one.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    Ok(FrftReport {
        roundtrip_order,
        grid_start: start,
        grid_step: step,
        grid_count: count,
        fourier_error,
        roundtrip_error,
        composition_error,
        tol_fourier,
        tol_roundtrip,
        pass: fourier_error <= tol_fourier
            && roundtrip_error <= tol_roundtrip
            && composition_error <= tol_roundtrip,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem3_flags_the_null_probe_as_out_of_regime() {
        let report = verify_theorem3(0.0, 0.0, 1.0, &[10, 50], 3, 7, 0.05).unwrap();
        assert!(!report.in_regime);
        assert!(!report.pass);
        for m in &report.mean_abs {
            assert!((m - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn theorem3_passes_on_the_reference_probe() {
        let report = verify_theorem3(1.0, 0.3, 1.0, &[100, 1000], 10, 7, 0.05).unwrap();
        assert!(report.in_regime);
        assert!(report.strictly_decreasing, "{:?}", report.mean_abs);
        assert!(report.within_envelope);
        assert!(report.pass);
    }

    #[test]
    fn ld_report_passes_with_impossible_threshold_semantics() {
        let report = verify_large_deviation(10, 0.5, 1.0, 0.3, 1, 5000, 11).unwrap();
        assert!((report.bound - 0.01).abs() < 1e-12);
        assert!(report.b_n > 0.0);
        assert!(report.pass, "{report:?}");
        assert!(report.index_weighted_mean.abs() < 0.2);
    }

    #[test]
    fn nonlinear_report_matches_cubic_decay() {
        let phase = PolynomialPhase::new(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let report = verify_nonlinear(&phase, &[10, 30, 100]).unwrap();
        assert_eq!(report.m, 3);
        assert_eq!(report.expected_slope, -2.0);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn frft_report_passes_default_tolerances() {
        let report = verify_frft(0.5, 1e-6, 1e-3).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.fourier_error <= 1e-6);
    }

    #[test]
    fn reports_serialize_with_spec_field_names() {
        let report = verify_large_deviation(10, 0.5, 1.0, 0.3, 1, 1000, 3).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for key in ["N", "C", "m_n_hat", "b_n", "bound", "empirical", "std_error", "pass"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}

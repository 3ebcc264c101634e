//! Quadratic Chernoff machinery for the ergodic averages.
//!
//! For bounded, independent but not identically distributed summands
//! `Y_n = sin(2π y_n)` with means `μ_n`, each log-MGF admits the
//! quadratic bound `ln M_n(ξ) ≤ μ_n ξ + C ξ²`; summing gives the convex
//! majorant
//!
//! ```text
//! Φ_N(ξ) = m_N ξ + (C/N) ξ²,     m_N = (1/N) Σ μ_n,
//! ```
//!
//! whose Legendre transform is the rate function
//! `I_N(y) = (N/4C)(m_N − y)²`. The exponential Markov inequality then
//! bounds the upper tail by `e^{−I_N(y)}`; the lower tail follows by
//! negating `Y`. At the deviation threshold `b_N = √(8C ln N / N)` the
//! bound equals `N⁻²` exactly, which is summable — the Borel–Cantelli
//! input that makes `S_N/N → m_N` almost surely.
//!
//! `|Y_n| ≤ 1` gives the default subgaussian constant
//! `C = (b−a)²/8 = 1/2` (bounded-variable bound); `C` stays a parameter
//! throughout. `m_N` is not in closed form for wrapped densities, so the
//! verification harness estimates it from a pilot stream.

use crate::rng::{stream, KeyStream};
use crate::sampling::circle_value;
use crate::{Error, KahanSum, Result};
use std::f64::consts::TAU;

/// Default subgaussian constant for `|Y| ≤ 1`.
pub const DEFAULT_SUBGAUSSIAN: f64 = 0.5;

/// Pointwise log-MGF bound `μξ + Cξ²`.
#[inline]
pub fn log_mgf_bound(mu: f64, c: f64, xi: f64) -> f64 {
    assert!(c > 0.0, "subgaussian constant must be positive");
    mu * xi + c * xi * xi
}

/// The quadratic large-deviation model `(N, C, m_N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFunctionModel {
    /// Sample count `N ≥ 1`.
    pub sample_count: u64,
    /// Subgaussian constant `C > 0`.
    pub subgaussian: f64,
    /// Mean `m_N` of the summand means.
    pub mean: f64,
}

/// Which tail a Chernoff bound controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Upper,
    Lower,
}

/// A Chernoff tail probability bound in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub probability: f64,
    /// `None` exactly when the bound is vacuous (`y = m_N`).
    pub tail: Option<Tail>,
    pub vacuous: bool,
}

impl RateFunctionModel {
    pub fn new(sample_count: u64, subgaussian: f64, mean: f64) -> Result<Self> {
        if sample_count < 1 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        if !(subgaussian > 0.0 && subgaussian.is_finite()) {
            return Err(Error::Domain(format!(
                "subgaussian constant must be positive, got {subgaussian}"
            )));
        }
        Ok(Self {
            sample_count,
            subgaussian,
            mean,
        })
    }

    /// `Φ_N(ξ) = m_N ξ + (C/N) ξ²`.
    #[inline]
    pub fn log_mgf_sum_bound(&self, xi: f64) -> f64 {
        self.mean * xi + self.subgaussian / self.sample_count as f64 * xi * xi
    }

    /// Legendre transform of `Φ_N`: `I_N(y) = (N/4C)(m_N − y)²`.
    ///
    /// For `y > m_N` this equals `sup_{ξ≥0} (yξ − Φ_N(ξ))`.
    #[inline]
    pub fn rate_function(&self, y: f64) -> f64 {
        let d = self.mean - y;
        self.sample_count as f64 / (4.0 * self.subgaussian) * d * d
    }

    /// `Pr(S_N/N > y) ≤ e^{−I_N(y)}` for `y > m_N`; the mirrored bound
    /// for `y < m_N`; flagged vacuous (bound 1) at `y = m_N`.
    pub fn chernoff_tail_bound(&self, y: f64) -> TailBound {
        if y == self.mean {
            return TailBound {
                probability: 1.0,
                tail: None,
                vacuous: true,
            };
        }
        TailBound {
            probability: (-self.rate_function(y)).exp(),
            tail: Some(if y > self.mean { Tail::Upper } else { Tail::Lower }),
            vacuous: false,
        }
    }

    /// `b_N` for this model's `N` and `C`.
    pub fn deviation_threshold(&self) -> Result<f64> {
        deviation_threshold(self.sample_count, self.subgaussian)
    }
}

/// Deviation level `b_N = √(8C ln N / N)`, at which the upper-tail bound
/// at `m_N + b_N` equals `N⁻²` exactly. Needs `N ≥ 2` (at `N = 1` the
/// threshold degenerates to 0 and the bound to 1).
pub fn deviation_threshold(sample_count: u64, subgaussian: f64) -> Result<f64> {
    if sample_count < 2 {
        return Err(Error::Domain(format!(
            "deviation threshold needs N >= 2, got {sample_count}"
        )));
    }
    if !(subgaussian > 0.0 && subgaussian.is_finite()) {
        return Err(Error::Domain(format!(
            "subgaussian constant must be positive, got {subgaussian}"
        )));
    }
    let n = sample_count as f64;
    Ok((8.0 * subgaussian * n.ln() / n).sqrt())
}

/// Monte Carlo experiment: repeated realizations of `S_N/N` for
/// `Y_n = sin(2π y_n)` on the unit lattice at one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloTailSpec {
    pub omega: f64,
    pub rate: f64,
    /// First summand index `n`.
    pub index_offset: i64,
    /// Number of summands `N`.
    pub count: u64,
    /// Tail threshold on `S_N/N`.
    pub threshold_y: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Result of [`monte_carlo_tail`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    /// Fraction of trials with `S_N/N > threshold_y`.
    pub empirical_prob: f64,
    /// Binomial standard error `√(p̂(1−p̂)/trials)`.
    pub std_error: f64,
    /// Empirical `m̂_N`, the trial mean of `S_N/N`.
    pub mean_estimate: f64,
    /// Trial mean of the index-weighted variant `(1/N) Σ sin(2π n X_n)`,
    /// recorded alongside the wrapped-orbit form for comparison.
    pub index_weighted_mean: f64,
}

/// Estimate `Pr(S_N/N > threshold_y)` over fresh jitter draws keyed
/// `(seed, TAIL, trial, n)`.
pub fn monte_carlo_tail(spec: &MonteCarloTailSpec) -> TailEstimate {
    assert!(spec.trials >= 1, "need at least one trial");
    assert!(spec.count >= 1, "need at least one summand");
    let base = KeyStream::new(spec.seed, stream::TAIL);

    let per_trial = crate::maybe_par_map(spec.trials as usize, |t| {
        let sub = base.substream(t as u64);
        let mut s = 0.0;
        let mut s_indexed = 0.0;
        for k in 0..spec.count {
            let n = spec.index_offset + k as i64;
            let jitter = sub.unit(k);
            let x = n as f64 + jitter;
            s += (TAU * circle_value(spec.omega, spec.rate, x)).sin();
            s_indexed += (TAU * n as f64 * jitter).sin();
        }
        let n = spec.count as f64;
        (s / n, s_indexed / n)
    });

    let mut exceed = 0u64;
    let mut mean = KahanSum::new();
    let mut mean_indexed = KahanSum::new();
    for &(avg, avg_indexed) in &per_trial {
        if avg > spec.threshold_y {
            exceed += 1;
        }
        mean.add(avg);
        mean_indexed.add(avg_indexed);
    }
    let trials = spec.trials as f64;
    let p = exceed as f64 / trials;
    TailEstimate {
        empirical_prob: p,
        std_error: (p * (1.0 - p) / trials).sqrt(),
        mean_estimate: mean.total() / trials,
        index_weighted_mean: mean_indexed.total() / trials,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_mgf_bound_closed_forms() {
        assert_eq!(log_mgf_bound(0.0, 0.5, 0.0), 0.0);
        assert!((log_mgf_bound(0.1, 0.5, 2.0) - 2.2).abs() < 1e-15);
    }

    #[test]
    fn empirical_mgf_obeys_bound_and_jensen_floor() {
        // Y = sin(2πX), X uniform: mean 0, |Y| <= 1, C = 1/2.
        let draws = 1_000_000u64;
        let s = KeyStream::new(404, stream::MGF);
        for &xi in &[-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
            let mut acc = KahanSum::new();
            let mut sq = KahanSum::new();
            let mut mean_y = KahanSum::new();
            for k in 0..draws {
                let y = (TAU * s.unit(k)).sin();
                let e = (xi * y).exp();
                acc.add(e);
                sq.add(e * e);
                mean_y.add(y);
            }
            let n = draws as f64;
            let m_hat = acc.total() / n;
            let var = sq.total() / n - m_hat * m_hat;
            let se_ln = (var / n).sqrt() / m_hat;
            let ln_m = m_hat.ln();
            let bound = log_mgf_bound(0.0, 0.5, xi);
            assert!(ln_m <= bound + 3.0 * se_ln, "xi {xi}: {ln_m} vs {bound}");
            let floor = xi * (mean_y.total() / n);
            assert!(ln_m >= floor - 3.0 * se_ln, "xi {xi}: {ln_m} vs floor {floor}");
        }
    }

    #[test]
    fn rate_function_closed_forms() {
        let model = RateFunctionModel::new(4, 1.0, 0.0).unwrap();
        assert_eq!(model.rate_function(model.mean), 0.0);
        assert!((model.rate_function(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rate_function_matches_numeric_legendre_sup() {
        let s = KeyStream::new(7, 0x1e6e);
        for case in 0..20u64 {
            let n = 1 + (s.unit(4 * case) * 49.0) as u64;
            let c = 0.1 + 1.9 * s.unit(4 * case + 1);
            let mean = s.unit(4 * case + 2) - 0.5;
            let y = mean + 1.5 * s.unit(4 * case + 3);
            let model = RateFunctionModel::new(n, c, mean).unwrap();
            let mut sup = f64::NEG_INFINITY;
            let points = 1_000_000;
            for k in 0..=points {
                let xi = 1000.0 * k as f64 / points as f64;
                sup = sup.max(y * xi - model.log_mgf_sum_bound(xi));
            }
            assert!(
                (model.rate_function(y) - sup).abs() < 1e-6,
                "case {case}: closed {} vs sup {sup}",
                model.rate_function(y)
            );
        }
    }

    #[test]
    fn phi_is_convex() {
        let model = RateFunctionModel::new(17, 0.8, -0.3).unwrap();
        let xs: Vec<f64> = (0..200).map(|k| -10.0 + 0.1 * k as f64).collect();
        for w in xs.windows(3) {
            let second =
                model.log_mgf_sum_bound(w[0]) - 2.0 * model.log_mgf_sum_bound(w[1])
                    + model.log_mgf_sum_bound(w[2]);
            assert!(second >= -1e-12, "convexity broken at {}", w[1]);
        }
    }

    #[test]
    fn chernoff_bound_closed_forms() {
        let model = RateFunctionModel::new(100, 0.5, 0.0).unwrap();
        let at_mean = model.chernoff_tail_bound(0.0);
        assert!(at_mean.vacuous);
        assert_eq!(at_mean.probability, 1.0);

        let upper = model.chernoff_tail_bound(0.3);
        assert_eq!(upper.tail, Some(Tail::Upper));
        assert!((upper.probability - (-4.5f64).exp()).abs() < 1e-12);

        let lower = model.chernoff_tail_bound(-0.3);
        assert_eq!(lower.tail, Some(Tail::Lower));
        assert_eq!(lower.probability, upper.probability);
    }

    #[test]
    fn deviation_threshold_hits_the_summable_bound() {
        let b = deviation_threshold(10, 0.5).unwrap();
        assert!((b - (4.0 * 10f64.ln() / 10.0).sqrt()).abs() < 1e-15);
        assert!((b - 0.9597).abs() < 1e-4);

        for &n in &[10u64, 100, 10_000] {
            let model = RateFunctionModel::new(n, 0.5, 0.2).unwrap();
            let b = model.deviation_threshold().unwrap();
            let bound = model.chernoff_tail_bound(model.mean + b);
            let target = (n as f64).powi(-2);
            assert!(
                (bound.probability - target).abs() <= 1e-12 * target,
                "N = {n}: {} vs {target}",
                bound.probability
            );
        }
        assert!(deviation_threshold(1, 0.5).is_err());
    }

    #[test]
    fn inverse_square_series_is_borel_cantelli_summable() {
        let mut partial = KahanSum::new();
        let mut at_million = 0.0;
        let mut prev = 0.0;
        for n in 2..=2_000_000u64 {
            partial.add(1.0 / (n as f64 * n as f64));
            if n == 1_000_000 {
                at_million = partial.total();
            }
            if n % 500_000 == 0 {
                assert!(partial.total() > prev);
                prev = partial.total();
            }
        }
        let total = partial.total();
        let limit = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
        assert!(total < limit, "{total} vs {limit}");
        assert!(total - at_million < 1e-6, "Cauchy tail {}", total - at_million);
    }

    #[test]
    fn impossible_thresholds_pin_the_tail_probabilities() {
        let base = MonteCarloTailSpec {
            omega: 1.0,
            rate: 0.3,
            index_offset: 1,
            count: 10,
            threshold_y: 1.01,
            trials: 2000,
            seed: 5,
        };
        let high = monte_carlo_tail(&base);
        assert_eq!(high.empirical_prob, 0.0);
        let low = monte_carlo_tail(&MonteCarloTailSpec {
            threshold_y: -1.01,
            ..base
        });
        assert_eq!(low.empirical_prob, 1.0);
        assert!(low.mean_estimate.abs() <= 1.0);
    }

    #[test]
    fn empirical_tails_never_beat_the_bound() {
        let s = KeyStream::new(99, 0xbeef);
        for case in 0..20u64 {
            let n = 5 + (s.unit(5 * case) * 45.0) as u64;
            let omega = 0.5 + 2.0 * s.unit(5 * case + 1);
            let rate = 0.05 + 0.5 * s.unit(5 * case + 2);
            let pilot = monte_carlo_tail(&MonteCarloTailSpec {
                omega,
                rate,
                index_offset: 1,
                count: n,
                threshold_y: 2.0,
                trials: 4000,
                seed: 1000 + case,
            });
            let delta = 0.2 + 0.6 * s.unit(5 * case + 3);
            let threshold = pilot.mean_estimate + delta;
            let est = monte_carlo_tail(&MonteCarloTailSpec {
                omega,
                rate,
                index_offset: 1,
                count: n,
                threshold_y: threshold,
                trials: 20_000,
                seed: 2000 + case,
            });
            let model = RateFunctionModel::new(n, 0.5, pilot.mean_estimate).unwrap();
            let bound = model.chernoff_tail_bound(threshold).probability;
            assert!(
                est.empirical_prob <= bound + 3.0 * est.std_error.max(1.0 / 20_000.0),
                "case {case}: {} vs {bound}",
                est.empirical_prob
            );
        }
    }
}

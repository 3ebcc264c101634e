//! Linear and polynomial-phase chirp signal models.
//!
//! A linear chirp component is `B·e^{i{ω + c(x−α)}x}` with complex
//! amplitude `B`, angular frequency `ω` (rad per x-unit), chirp rate `c`
//! (rad per x-unit²) and offset `α`. Expanding the exponent gives the
//! offset-free canonical form
//!
//! ```text
//! B·e^{i(ω₀ x + c x²)},      ω₀ = ω − c·α,
//! ```
//!
//! which is the parameterization the correlator probes; canonicalization
//! is exact algebra, so a polynomial of components evaluates identically
//! before and after. Nonlinear chirps `B·e^{i p(x)}` carry a real
//! polynomial phase of degree `m ≥ 1` evaluated by Horner recurrence.

use num_complex::Complex64;

use crate::{Error, Result};

/// Default absolute per-parameter tolerance for merging canonical
/// components. 1e-9 separates distinct components at any realistic grid
/// scale while absorbing refinement jitter.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// One linear chirp component `B·e^{i{ω + c(x−α)}x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpComponent {
    pub amplitude: Complex64,
    /// ω, rad per x-unit.
    pub omega: f64,
    /// c, rad per x-unit².
    pub rate: f64,
    /// α, x-units.
    pub offset: f64,
}

impl ChirpComponent {
    pub fn new(amplitude: Complex64, omega: f64, rate: f64, offset: f64) -> Self {
        Self {
            amplitude,
            omega,
            rate,
            offset,
        }
    }

    /// Value at `x`; the modulus equals `|B|` up to rounding.
    #[inline]
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let phase = (self.omega + self.rate * (x - self.offset)) * x;
        self.amplitude * Complex64::cis(phase)
    }

    /// Offset-free reparameterization `ω₀ = ω − c·α`.
    pub fn canonical(&self) -> CanonicalChirp {
        CanonicalChirp {
            amplitude: self.amplitude,
            omega0: self.omega - self.rate * self.offset,
            rate: self.rate,
        }
    }
}

/// Offset-free chirp `B·e^{i(ω₀ x + c x²)}`, the probe-matched form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalChirp {
    pub amplitude: Complex64,
    /// ω₀ = ω − c·α, rad per x-unit.
    pub omega0: f64,
    /// c, rad per x-unit².
    pub rate: f64,
}

impl CanonicalChirp {
    pub fn new(amplitude: Complex64, omega0: f64, rate: f64) -> Self {
        Self {
            amplitude,
            omega0,
            rate,
        }
    }

    #[inline]
    pub fn phase_at(&self, x: f64) -> f64 {
        self.omega0 * x + self.rate * (x * x)
    }

    #[inline]
    pub fn evaluate(&self, x: f64) -> Complex64 {
        self.amplitude * Complex64::cis(self.phase_at(x))
    }
}

/// Finite ordered sum of linear chirp components.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChirpPolynomial {
    pub components: Vec<ChirpComponent>,
}

impl ChirpPolynomial {
    pub fn new(components: Vec<ChirpComponent>) -> Self {
        Self { components }
    }

    /// Component count `k`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Sum of component values at `x`; the empty sum is 0.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        self.components
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc + c.evaluate(x))
    }

    /// Canonical components sorted by `(rate, ω₀)`, with components whose
    /// parameters collide within `merge_tol` (per parameter, absolute)
    /// amplitude-summed and exact cancellations dropped.
    pub fn canonicalize(&self, merge_tol: f64) -> Vec<CanonicalChirp> {
        assert!(merge_tol >= 0.0, "merge tolerance must be non-negative");
        let mut canon: Vec<CanonicalChirp> =
            self.components.iter().map(ChirpComponent::canonical).collect();
        canon.sort_by(|a, b| {
            a.rate
                .total_cmp(&b.rate)
                .then(a.omega0.total_cmp(&b.omega0))
        });

        let mut merged: Vec<CanonicalChirp> = Vec::with_capacity(canon.len());
        for c in canon {
            match merged.last_mut() {
                Some(last)
                    if (c.omega0 - last.omega0).abs() < merge_tol
                        && (c.rate - last.rate).abs() < merge_tol =>
                {
                    last.amplitude += c.amplitude;
                }
                _ => merged.push(c),
            }
        }
        merged.retain(|c| c.amplitude.norm_sqr() != 0.0);
        merged
    }
}

/// Real polynomial `p(x) = p_0 + p_1 x + … + p_m x^m` with `p_m ≠ 0`,
/// `m ≥ 1`, used as a chirp phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPhase {
    coefficients: Vec<f64>,
}

impl PolynomialPhase {
    /// Trailing zero coefficients are trimmed; the result must have
    /// degree ≥ 1 and finite coefficients.
    pub fn new(mut coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("polynomial coefficients must be finite".into()));
        }
        while coefficients.last() == Some(&0.0) {
            coefficients.pop();
        }
        let degree = coefficients.len().saturating_sub(1);
        if degree < 1 {
            return Err(Error::UnsupportedDegree {
                degree,
                reason: "phase polynomial needs degree >= 1".into(),
            });
        }
        Ok(Self { coefficients })
    }

    /// Degree `m` (index of the last nonzero coefficient).
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Leading coefficient `c = p_m`.
    pub fn leading(&self) -> f64 {
        *self.coefficients.last().expect("nonempty by construction")
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Horner evaluation of `p(x)`.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Horner evaluation of `p′(x)`.
    #[inline]
    pub fn derivative_eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for i in (1..self.coefficients.len()).rev() {
            acc = acc * x + i as f64 * self.coefficients[i];
        }
        acc
    }
}

/// Polynomial-phase chirp `B·e^{i p(x)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearChirp {
    pub amplitude: Complex64,
    pub phase: PolynomialPhase,
}

impl NonlinearChirp {
    pub fn new(amplitude: Complex64, phase: PolynomialPhase) -> Self {
        Self { amplitude, phase }
    }

    #[inline]
    pub fn evaluate(&self, x: f64) -> Complex64 {
        self.amplitude * Complex64::cis(self.phase.eval(x))
    }
}

/// Smallest `T ≥ 0` past which the monotonicity chain
/// `|p′(x)| ≥ (|c|m/2)|x|^{m−1} > 2π` holds for all `|x| > T`.
///
/// Past `T` the phase wraps at least one full turn per unit interval,
/// which is what the circle density argument for polynomial phases needs.
/// Requires degree `m ≥ 2`.
pub fn monotonicity_threshold(phase: &PolynomialPhase) -> Result<f64> {
    let m = phase.degree();
    if m < 2 {
        return Err(Error::UnsupportedDegree {
            degree: m,
            reason: "monotonicity threshold needs degree >= 2".into(),
        });
    }
    let c = phase.leading().abs();
    let half_lead = c * m as f64 / 2.0;

    // u > t_mid makes the middle term exceed 2π.
    let t_mid = (2.0 * std::f64::consts::PI / half_lead).powf(1.0 / (m as f64 - 1.0));
    // For |x| >= max(1, r_tail) the lower-order terms of p' are at most
    // half the leading term, so the first inequality holds.
    let tail: f64 = (1..m)
        .map(|i| (i as f64 * phase.coefficients()[i]).abs())
        .sum();
    let r_tail = 2.0 * tail / (m as f64 * c);
    let hi = 1.25 * t_mid.max(r_tail).max(1.0) + 1.0;

    let violated = |u: f64| -> bool {
        if half_lead * u.powi(m as i32 - 1) <= 2.0 * std::f64::consts::PI {
            return true;
        }
        let floor = half_lead * u.powi(m as i32 - 1);
        phase.derivative_eval(u).abs() < floor || phase.derivative_eval(-u).abs() < floor
    };

    // Outward scan for the last violated point, then bisect the boundary.
    // u = 0 always violates the middle inequality, so a bracket exists.
    const GRID: usize = 8192;
    let step = hi / GRID as f64;
    let mut lo = 0.0;
    let mut hi_clear = hi;
    for k in (0..GRID).rev() {
        let u = k as f64 * step;
        if violated(u) {
            lo = u;
            hi_clear = (k + 1) as f64 * step;
            break;
        }
    }
    for _ in 0..200 {
        if hi_clear - lo <= 1e-12 * hi_clear.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi_clear);
        if violated(mid) {
            lo = mid;
        } else {
            hi_clear = mid;
        }
    }
    Ok(hi_clear)
}

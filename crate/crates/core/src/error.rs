//! Error type shared across the crate.

use thiserror::Error;

/// Everything a contract in this crate can reject.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value array and a sample set that must be aligned one-to-one
    /// have different lengths.
    #[error("value/sample alignment mismatch: {values} values vs {samples} sample points")]
    Alignment { values: usize, samples: usize },

    /// Probe with `ω = 0` and `c = 0` where a nontrivial probe is required.
    #[error("invalid probe: omega and rate are both zero")]
    InvalidProbe,

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed axis, range or window configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Polynomial phase of unsupported degree.
    #[error("unsupported degree {degree}: {reason}")]
    UnsupportedDegree { degree: usize, reason: String },

    /// Fractional order too close to an even integer, where the quadrature
    /// kernel is singular. The even orders themselves are served by the
    /// exact identity / parity operators.
    #[error("singular fractional order b = {b}: |sin(bπ/2)| = {sin_alpha:.3e} < {min}; \
             orders with b ≡ 0 (mod 4) are the identity and b ≡ 2 (mod 4) is parity")]
    SingularOrder { b: f64, sin_alpha: f64, min: f64 },

    /// A numeric objective became NaN or infinite.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Malformed input file content.
    #[error("parse error: {0}")]
    Parse(String),
}

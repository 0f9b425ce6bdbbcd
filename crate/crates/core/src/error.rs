use thiserror::Error;

/// Errors raised by the estimation pipeline, the samplers and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A complex moment left the floating point range even after renormalisation.
    #[error("moment overflow at s = {re} + {im}i (log-magnitude {log_magnitude:.1})")]
    Overflow { re: f64, im: f64, log_magnitude: f64 },

    /// The denominator moment of the Laplace exponent ratio is numerically zero.
    #[error(
        "degenerate denominator at v = {v}: |moment| = {modulus:e} below threshold {threshold:e}; \
         the sample is too small or v_max too large for the decay of the Mellin transform"
    )]
    DegenerateDenominator { v: f64, modulus: f64, threshold: f64 },

    #[error("zero denominator in {0}: weights vanish on the grid")]
    ZeroDenominator(&'static str),

    #[error("Laplace exponent evaluated at its pole z = -b")]
    PoleAtMinusB,

    #[error("argument {re} + {im}i is outside the accuracy region |Im z| <= {limit}")]
    AccuracyRegionExceeded { re: f64, im: f64, limit: f64 },

    #[error("series truncation did not converge within {cap} terms")]
    TruncationCapReached { cap: usize },

    /// Fitted exponential decay rate of the empirical Mellin transform is not positive.
    #[error("empirical Mellin transform does not decay exponentially (fitted rate {rate:.4})")]
    NonDecayingMoments { rate: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter violates an invariant (negative rate, non-finite value, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A denominator fell below the singularity floor.
    #[error("singular point: |{what}| = {modulus:.3e} below floor {floor:.3e}")]
    SingularPoint {
        what: &'static str,
        modulus: f64,
        floor: f64,
    },

    /// Drive is on (omega != 0) while the driven transition is exactly degenerate
    /// (delta3 + i*gamma3 = 0), so the stationary relations cannot be closed.
    #[error("degenerate drive: omega != 0 while delta3 + i*gamma3 = 0")]
    DegenerateDrive,

    /// A sweep slice with an empty interval or non-finite bounds.
    #[error("invalid slice: {0}")]
    InvalidSlice(String),

    /// A sweep grid violating its structural invariants.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Contrast ratio requested with both reflections zero.
    #[error("contrast ratio undefined: R_f = R_b = 0")]
    UndefinedContrast,

    /// Unknown preset name; the message lists the available ones.
    #[error("unknown preset {name:?}; available: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("config error: {0}")]
    Config(#[from] serde_json::Error),
}

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("infeasible correlation {rho} for {m} objectives (must lie in (-1/(m-1), 1])")]
    InfeasibleCorrelation { m: usize, rho: f64 },

    #[error("invalid instance parameters: {0}")]
    InvalidParams(String),

    #[error("solution has {found} bits, instance expects {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("bit index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("malformed instance file at line {line}: {message}")]
    MalformedFile { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point coordinate {value} lies below reference {reference} in objective {objective}")]
    PointBelowReference {
        objective: usize,
        value: f64,
        reference: f64,
    },

    #[error("cannot draw {mu} distinct solutions from a space of 2^{n}")]
    InfeasibleCardinality { mu: usize, n: usize },

    #[error("every replacement neighbor collides with an existing member")]
    ExhaustedNeighborhood,

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("series of length {len} too short for lag {k_max}")]
    SeriesTooShort { len: usize, k_max: usize },

    #[error("autocorrelation length undefined for r(1) = {r1}")]
    UndefinedLength { r1: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than the runtime environment.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Io { .. } | Error::Csv(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical kernels and the scenario runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error(
        "mode array is not Hermitian: worst mismatch {mismatch:.3e} relative to peak {peak:.3e}"
    )]
    NonHermitian { mismatch: f64, peak: f64 },

    #[error("imaginary residue {ratio:.3e} of peak amplitude exceeds {limit:.1e}; field is aliased or under-resolved")]
    ImaginaryResidue { ratio: f64, limit: f64 },

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:.3e})")]
    QuadratureBudget { a: f64, b: f64, estimate: f64 },

    #[error("weighted norm is not integrable: {0}")]
    NonIntegrable(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

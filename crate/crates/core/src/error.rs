use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library, the oracle and the profiling harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("correlation {0} is outside [-1, 1]")]
    Domain(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "{method} did not reach the accuracy target at (x={x}, y={y}, rho={rho}): \
         estimate {estimate:e} > target {target:e}"
    )]
    Accuracy {
        method: &'static str,
        x: f64,
        y: f64,
        rho: f64,
        estimate: f64,
        target: f64,
    },

    #[error("oracle failed in bucket {bucket}, sample {sample}: {source}")]
    Profile {
        bucket: usize,
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no bucket statistics to write")]
    EmptyProfile,

    #[error("malformed profile csv at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

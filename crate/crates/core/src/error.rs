use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("current layers overlap: {0}")]
    LayerOverlap(String),
    #[error("measurement plane placement is invalid: {0}")]
    InvasivePlane(String),
    #[error("layer thickness must be positive (got {0} m)")]
    NonPositiveThickness(f64),
    #[error("input contains non-finite values")]
    NonFiniteInput,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid plane: {0}")]
    InvalidPlane(String),
    #[error("evaluation plane at z = {z} m lies inside the source slab")]
    TargetInsideSource { z: f64 },
    #[error("continuation matrix is singular at k = {k} rad/m (det = {det:e})")]
    SingularBin { k: f64, det: f64 },
    #[error("both measurement planes lie on the same side of the stack; the continuation matrix is rank-deficient")]
    SameSidePlanes,
    #[error("reconstruction produced non-finite values; lower k_cut or max_gain")]
    NonFiniteResult,
    #[error("no wavenumber satisfies the amplification guard max_gain = {max_gain}; minimum attainable gain is {min_gain:.3e}")]
    AutoCutoffUnattainable { max_gain: f64, min_gain: f64 },
    #[error("strip does not fit inside the grid: {0}")]
    StripOutOfBounds(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("grid file {path}: {reason}")]
    GridFormat { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SameSidePlanes => 3,
            Error::Io { .. } | Error::GridFormat { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

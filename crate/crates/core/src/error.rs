use std::path::PathBuf;

use crate::master::BathLabel;

/// Errors raised by the physics modules and the sweep front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("operator is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("operator dimension {dim} exceeds the limit of {limit}")]
    DimensionOverflow { dim: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bath {0} is missing from the bath list")]
    MissingBath(BathLabel),

    #[error("bath {0} appears more than once")]
    DuplicateBath(BathLabel),

    #[error("eigenvector {column} is not normalized (norm = {norm})")]
    NotNormalized { column: usize, norm: f64 },

    #[error("rate matrix has {} disconnected closed blocks: {blocks:?}", blocks.len())]
    DisconnectedStateSpace { blocks: Vec<Vec<usize>> },

    #[error("mixing angle undefined: qubit splitting equals the resonator frequency and the coupling vanishes")]
    UndefinedMixingAngle,

    #[error("weak-coupling current is singular at epsilon = omega0")]
    ResonantPrefactor,

    #[error(
        "truncation did not converge by n_max = {last}: current {previous_current:.6e} -> {last_current:.6e}, \
         g2 {previous_g2:?} -> {last_g2:?}"
    )]
    TruncationNotConverged {
        last: usize,
        previous_current: f64,
        last_current: f64,
        previous_g2: Option<f64>,
        last_g2: Option<f64>,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter { .. } => 1,
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}

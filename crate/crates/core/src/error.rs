use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the simulation, learning, or harness layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    ShapeMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("ray {ray} delay {delay:e} s lies outside the tap window [0, {window:e}) s")]
    DelayOutOfWindow { ray: usize, delay: f64, window: f64 },

    #[error("interaction vector entry {index} has modulus {modulus}, expected 1")]
    NonUnitModulus { index: usize, modulus: f64 },

    #[error("element index {index} out of range for an array of {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("malformed channel file header: {0}")]
    MalformedHeader(String),

    #[error("truncated channel payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("non-finite value in sample {sample} at float offset {offset}")]
    NonFinite { sample: usize, offset: usize },

    #[error("malformed model checkpoint: {0}")]
    MalformedCheckpoint(String),

    #[error("insufficient samples: need {needed}, have {available}")]
    InsufficientSamples { needed: usize, available: usize },

    #[error("training diverged at epoch {epoch}: loss is not finite")]
    Divergence { epoch: usize },

    #[error("model is in training mode; switch to inference before predicting")]
    NotInferenceMode,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn shape(context: &'static str, expected: impl ToString, found: impl ToString) -> Self {
        Error::ShapeMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

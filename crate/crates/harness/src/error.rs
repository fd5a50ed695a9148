use std::path::PathBuf;

use kinlim_core::{FluidError, KineticError, ModelError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("sweep point epsilon = {epsilon} failed: {source}")]
    SweepPoint {
        epsilon: f64,
        source: KineticError,
    },

    #[error("reference solve for the sweep failed: {0}")]
    Reference(#[from] FluidError),

    #[error("kinetic setup failed: {0}")]
    Kinetic(#[from] KineticError),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("no sweep reports found in the given inputs")]
    EmptyInput,

    #[error("{failures} verification identities failed")]
    VerificationFailed { failures: usize },
}

//! Error types, one enum per subsystem.

use thiserror::Error;

/// Errors from the exact BGK model layer.
#[derive(Debug, Error)]
pub enum ModelError {
    /// A transport-coefficient tensor identity failed on some index tuple.
    #[error("tensor identity mismatch at indices ({i},{j},{k},{l}): got {got}, expected {expected}")]
    TensorMismatch {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        got: String,
        expected: String,
    },
    /// Collision frequency must be positive.
    #[error("collision frequency must be positive, got {0}")]
    NonPositiveFrequency(String),
}

/// Errors from the discrete kinetic solver.
#[derive(Debug, Error)]
pub enum KineticError {
    /// Gauss-Hermite node computation failed or the quadrature check
    /// against the exact oracle did not hold.
    #[error("quadrature degeneracy: {0}")]
    QuadratureDegeneracy(String),
    /// The relaxation exponent came out non-finite.
    #[error("stiffness overflow: lambda = {lambda} is not finite")]
    StiffnessOverflow { lambda: f64 },
    /// Maximum step count reached with residual above tolerance.
    #[error("not converged after {steps} steps, residual {residual:e}")]
    NotConverged { steps: usize, residual: f64 },
    /// A source field violated its invariant (non-solenoidal f or
    /// non-zero mean).
    #[error("invalid source field: {0}")]
    InvalidSource(String),
    /// Grid shape mismatch between field and solver.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Errors from the stationary fluid reference solvers.
#[derive(Debug, Error)]
pub enum FluidError {
    /// Forcing had a non-zero mean (k = 0) mode, which the stationary
    /// problem on the torus cannot absorb.
    #[error("singular k=0 mode in forcing (mean magnitude {0:e})")]
    SingularMode(f64),
    /// Picard iteration failed to contract; forcing too large.
    #[error("no contraction after {iterations} iterations, last change {change:e}")]
    NoContraction { iterations: usize, change: f64 },
}

/// Errors from the checkpoint file format.
#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes, not a checkpoint file")]
    BadMagic,
    #[error("unsupported checkpoint version {0}")]
    BadVersion(u32),
    #[error("truncated checkpoint: {0}")]
    Truncated(String),
}

//! Experiment harness: configuration, the exact-algebra verification
//! suite, the homogeneous relaxation check, epsilon sweeps against the
//! fluid references, and report emission.

pub mod config;
pub mod error;
pub mod relax;
pub mod report;
pub mod sweep;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::HarnessError;

//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by geometry, channel, synthesis and metrics operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter violated a construction invariant.
    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// An element index fell outside `-N..=N`.
    #[error("element index {index} outside [-{half_count}, {half_count}]")]
    ElementIndexOutOfRange { index: i32, half_count: u32 },

    /// A per-element vector did not have `2N+1` entries.
    #[error("per-element vector has {actual} entries, array has {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    /// The Bob-directed constraints cannot be met at this geometry
    /// (for example a grazing receiver in two-ray mode, where every
    /// interference factor vanishes).
    #[error("weight synthesis infeasible: {reason}")]
    InfeasibleGeometry { reason: String },

    /// The randomized solver exhausted its attempts without meeting the
    /// residual tolerance; the best residuals reached are attached.
    #[error(
        "weight synthesis did not converge after {attempts} attempts \
         (best |kappa-1| = {kappa_residual:.3e}, best |eta| = {eta_residual:.3e})"
    )]
    SynthesisFailed {
        attempts: usize,
        kappa_residual: f64,
        eta_residual: f64,
    },

    /// A weights CSV file could not be parsed.
    #[error("weights csv, line {line}: {message}")]
    WeightsCsv { line: usize, message: String },

    /// Secrecy analysis needs at least one eavesdropper.
    #[error("eavesdropper set must contain at least one point")]
    EmptyEveSet,

    /// An eavesdropper may not share the designated receiver's location.
    #[error("eavesdropper {index} sits exactly at the designated receiver")]
    EveAtBob { index: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

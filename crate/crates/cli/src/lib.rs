//! Experiment harness around the simulator core: JSON configuration,
//! seeded sweep runners, and CSV artifacts.

use thiserror::Error;

pub mod config;
pub mod experiment;

pub use config::{load_config, parse_config, Experiment, ExperimentConfig, SweepVariable};
pub use experiment::{
    emit_weights, run_ber_sweep, run_secrecy_sweep, sample_eves, verify_weights_file,
    write_output, CsvOutput, VerifiedPair,
};

/// Process exit code for configuration problems.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit code for infeasible or non-convergent weight synthesis.
pub const EXIT_SYNTHESIS: i32 = 3;
/// Process exit code for filesystem problems.
pub const EXIT_IO: i32 = 4;

/// Harness-level errors, each mapping to a distinct exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("synthesis: {0}")]
    Synthesis(fdadm_core::Error),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Synthesis(_) => EXIT_SYNTHESIS,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<fdadm_core::Error> for CliError {
    fn from(e: fdadm_core::Error) -> Self {
        match e {
            fdadm_core::Error::SynthesisFailed { .. }
            | fdadm_core::Error::InfeasibleGeometry { .. } => CliError::Synthesis(e),
            fdadm_core::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

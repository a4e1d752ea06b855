//! Command-line driver for `bosonlab-core`: JSON/CSV formats, parallel
//! sweeps and the `bosonlab` subcommands.

pub mod cli;
pub mod io;
pub mod parallel;

use bosonlab_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_TRUNCATION: i32 = 3;
pub const EXIT_NON_CONVERGENCE: i32 = 4;

impl LabError {
    /// Process exit code: 2 for bad input, 3 for truncation, 4 for
    /// non-convergence, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => EXIT_CONFIG,
            LabError::Core(CoreError::Truncation { .. }) => EXIT_TRUNCATION,
            LabError::Core(CoreError::NonConvergence(_)) => EXIT_NON_CONVERGENCE,
            LabError::Core(_) => EXIT_CONFIG,
            LabError::Io(_) | LabError::Csv(_) | LabError::Json(_) => 1,
        }
    }
}

//! Command-line front end for `cxell`: file formats, solver commands and
//! the seeded verification suite.

pub mod commands;
pub mod io;
pub mod suite;

pub use commands::{execute, run, Command, Format, GenKind, Outcome, RunConfig};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INPUT_ERROR: i32 = 1;
    pub const NON_CONVERGENCE: i32 = 2;
    pub const PROPERTY_VIOLATED: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input at {field}: {message}")]
    Input { field: String, message: String },
    #[error("cannot write output: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] cxell::Error),
}

impl CliError {
    pub fn input(field: &str, message: impl ToString) -> Self {
        Self::Input { field: field.to_string(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(cxell::Error::NonConvergence { .. }) => exit::NON_CONVERGENCE,
            _ => exit::INPUT_ERROR,
        }
    }
}

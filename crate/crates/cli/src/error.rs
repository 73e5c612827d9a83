use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INVARIANT: i32 = 2;
    pub const BUDGET: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("{path}:{line}: {msg}")]
    Shape { path: PathBuf, line: usize, msg: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] minksym_core::Error),

    #[error("{failed} of {total} properties failed")]
    VerifyFailed { failed: usize, total: usize },

    #[error("{failed} of {total} runs failed")]
    SweepFailed { failed: usize, total: usize, code: i32 },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io { .. } | Self::Shape { .. } | Self::Csv(_) => exit::USAGE,
            Self::Core(e) => core_exit_code(e),
            Self::VerifyFailed { .. } => exit::INVARIANT,
            Self::SweepFailed { code, .. } => *code,
        }
    }
}

/// Exit code for a core error: violations 2, exhausted budgets 3, bad input 1.
pub fn core_exit_code(e: &minksym_core::Error) -> i32 {
    use minksym_core::Error as E;
    match e {
        E::InvariantViolation { .. } => exit::INVARIANT,
        E::BudgetExhausted { .. } | E::StrategyExhausted(_) => exit::BUDGET,
        _ => exit::USAGE,
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

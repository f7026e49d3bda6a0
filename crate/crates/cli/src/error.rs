use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{location}: {message}")]
    Config { location: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Engine(#[from] extinction_discount::Error),
    #[error("{0} divergent result(s) with --strict")]
    Divergent(usize),
    #[error("reproducibility self-check failed: {0}")]
    NotReproducible(String),
    #[error("{failures} oracle disagreement(s), budget is {budget}")]
    OracleBudget { failures: usize, budget: usize },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config { .. } | CliError::Io { .. } | CliError::Engine(_) => 1,
            CliError::Divergent(_) => 2,
            CliError::NotReproducible(_) => 3,
            CliError::OracleBudget { .. } => 4,
        })
    }
}

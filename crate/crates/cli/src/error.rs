use lamopt_core::LamError;
use thiserror::Error;

/// Process exit codes. These values are a stable interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    VerificationFailed = 1,
    InputError = 2,
    OuterInfeasible = 3,
    InnerRuleInfeasible = 4,
    NumericalFailure = 5,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{path}: {source}")]
    Parse { path: String, source: serde_json::Error },

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] LamError),
}

impl CliError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(LamError::Numerical(_) | LamError::IllConditioned) => ExitCode::NumericalFailure,
            _ => ExitCode::InputError,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

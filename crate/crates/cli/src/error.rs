use symdecon::DeconError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("numerical failure: {0}")]
    Numerical(DeconError),

    /// Carries the number of failed checks; the report itself is already written.
    #[error("{0} validation check(s) failed")]
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<DeconError> for CliError {
    fn from(e: DeconError) -> Self {
        match e {
            DeconError::ParameterDomain(_)
            | DeconError::SymmetrizationInvalid(_)
            | DeconError::AtomNotRepresentable(_)
            | DeconError::StepMismatch(..) => CliError::Config(e.to_string()),
            DeconError::InvalidSample(_) => CliError::Input(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

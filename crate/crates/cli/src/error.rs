use affina_core::Error as CoreError;
use thiserror::Error;

/// Command failures, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 1,
            CliError::Degenerate(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::InvalidForm(_) | CoreError::WrongChart(_) | CoreError::InvalidScene(_) | CoreError::OrderMismatch { .. } => {
                CliError::Input(msg)
            }
            CoreError::ParabolicPoint { .. }
            | CoreError::NoRealDirection { .. }
            | CoreError::DegeneratePortrait(_)
            | CoreError::NotADiscriminantPoint { .. }
            | CoreError::DegenerateUmbilic(_) => CliError::Degenerate(msg),
            CoreError::SingularJet { .. }
            | CoreError::NegativeBase { .. }
            | CoreError::SingularZeroSet { .. }
            | CoreError::Numerical(_) => CliError::Numerical(msg),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Numerical(format!("json encoding: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

use thiserror::Error;

/// Failures surfaced to the shell, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    ClassMismatch(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::ClassMismatch(_) => 3,
            Self::Numerical(_) => 4,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }
}

impl From<bubble_core::Error> for CliError {
    fn from(e: bubble_core::Error) -> Self {
        use bubble_core::Error as E;
        match e {
            E::ClassMismatch { .. } => Self::ClassMismatch(e.to_string()),
            E::Numerical(_) => Self::Numerical(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Input(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Input(format!("malformed JSON: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Input(format!("csv error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

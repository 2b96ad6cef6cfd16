use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Input { path: String, message: String },

    /// A tie between the samples, already located in the input files.
    #[error("{0}")]
    Tie(String),

    #[error("{0} entries disagree between enumeration and formula")]
    OracleMismatch(usize),

    #[error(transparent)]
    Core(#[from] exceedance_core::Error),

    #[error("output: {0}")]
    Io(#[from] std::io::Error),

    #[error("output: {0}")]
    Csv(#[from] csv::Error),

    #[error("output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input { path: path.into(), message: message.into() }
    }

    /// 2 usage, 3 unreadable input, 4 tie, 5 enumeration size bound, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        use exceedance_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Input { .. } => 3,
            CliError::Tie(_) => 4,
            CliError::Core(e) => match e {
                E::InvalidParameter(_) => 2,
                E::EmptySample { .. } | E::NonFinite { .. } => 3,
                E::Tie { .. } => 4,
                E::SizeBound { .. } => 5,
                _ => 1,
            },
            CliError::OracleMismatch(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

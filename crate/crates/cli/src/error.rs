use std::io;
use std::path::PathBuf;

use godunov_core::solver::RunFailure;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    ConfigParse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] godunov_core::Error),
    #[error(transparent)]
    Run(Box<RunFailure>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: malformed field file: {reason}")]
    FieldFormat { path: PathBuf, reason: String },
}

impl CliError {
    /// Process exit status: 2 configuration, 3 non-physical state, 4 vacuum,
    /// 5 too few levels, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        use godunov_core::Error as E;
        let core = match self {
            CliError::ConfigParse { .. } | CliError::Config(_) => return 2,
            CliError::Core(e) => e,
            CliError::Run(f) => &f.error,
            _ => return 1,
        };
        match core {
            E::NonPhysical { .. } => 3,
            E::Vacuum { .. } => 4,
            E::InsufficientLevels { .. } => 5,
            E::InvalidParameter(_) | E::ResolutionMismatch { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Csv { path, source }
    }
}

impl From<RunFailure> for CliError {
    fn from(f: RunFailure) -> Self {
        CliError::Run(Box::new(f))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("positivity violated: eigenvalue {eigenvalue:.3e} below tolerance")]
    Positivity { eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not pure (purity {purity:.9})")]
    NotPure { purity: f64 },

    #[error("initial state has ground/dark coherence of magnitude {overlap:.3e}")]
    GroundDarkCoherence { overlap: f64 },

    #[error("{what} did not converge: {detail}")]
    NotConverged { what: &'static str, detail: String },

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("i/o: {0}")]
    Io(String),

    #[error("{source} ({completed} of {total} rows completed)")]
    Partial { completed: usize, total: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidParameter(_) | Error::Io(_) => 2,
            Error::NotConverged { .. } => 3,
            Error::Partial { source, .. } => source.exit_code(),
            _ => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Coarse error classes, mapped to process exit codes by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numeric,
    Convergence,
    Io,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 1,
            ErrorClass::Numeric => 2,
            ErrorClass::Convergence => 3,
            ErrorClass::Io => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorClass::Config => "config",
            ErrorClass::Numeric => "numeric",
            ErrorClass::Convergence => "convergence",
            ErrorClass::Io => "io",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("non-integrable tail: fitted decay exponent {exponent:.4} must exceed 1")]
    NonIntegrableTail { exponent: f64 },
    #[error("missing derivative data: {0}")]
    MissingDerivative(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("closure coefficient D_k below its scaled floor at k = {k} (|D| = {value:.3e})")]
    ClosureFloor { k: i64, value: f64 },
    #[error("all-zero fit window: {0}")]
    EmptyFitWindow(String),
    #[error("Picard iteration diverged: {0}")]
    Divergence(String),
    #[error("Picard iteration not converged after {iterations} iterations (last distance {last:.3e})")]
    NotConverged { iterations: usize, last: f64 },
    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed data file {path}: {msg}")]
    Format { path: String, msg: String },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::Config(_) | Error::Refused(_) => ErrorClass::Config,
            Error::Divergence(_) | Error::NotConverged { .. } => ErrorClass::Convergence,
            Error::Io { .. } | Error::Format { .. } => ErrorClass::Io,
            _ => ErrorClass::Numeric,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

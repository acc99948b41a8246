use std::fmt;

/// Errors that end a run, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or configuration.
    Usage(String),
    /// A numerical routine rejected a parameter tuple.
    Numeric { tuple: String, source: fracmod::Error },
    /// Reading or writing files failed.
    Io(String),
}

pub const EXIT_FAILED_CHECKS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_IO: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric { .. } => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric { tuple, source } => write!(f, "{source} at ({tuple})"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Names a parameter tuple for error messages.
pub fn tuple(pairs: &[(&str, f64)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

/// Attaches the parameter tuple to a library error.
pub trait AtTuple<T> {
    fn at(self, pairs: &[(&str, f64)]) -> Result<T, CliError>;
}

impl<T> AtTuple<T> for fracmod::Result<T> {
    fn at(self, pairs: &[(&str, f64)]) -> Result<T, CliError> {
        self.map_err(|source| match source {
            fracmod::Error::Io(m) => CliError::Io(m),
            source => CliError::Numeric { tuple: tuple(pairs), source },
        })
    }
}

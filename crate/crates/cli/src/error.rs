use std::fmt;

use sqcat::Error;

/// Failure classes of a run; each maps to its own exit status.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Physics(String),
    Truncation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Truncation(_) => 4,
            CliError::Numerical(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            CliError::Config(m) => ("config error", m),
            CliError::Physics(m) => ("physics error", m),
            CliError::Truncation(m) => ("truncation error", m),
            CliError::Numerical(m) => ("numerical error", m),
            CliError::Io(m) => ("i/o error", m),
        };
        write!(f, "{kind}: {msg}")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Truncation { .. } => CliError::Truncation(msg),
            Error::StepSize { .. } | Error::Numerical(_) | Error::Linalg(_) | Error::DimensionMismatch { .. } => {
                CliError::Numerical(msg)
            }
            Error::UndefinedState(_)
            | Error::SqueezeDivergence { .. }
            | Error::InvalidParameter(_)
            | Error::Infeasible(_)
            | Error::NullSpaceMultiplicity { .. } => CliError::Physics(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

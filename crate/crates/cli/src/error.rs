use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid configuration:{}", Bullets(.0))]
    Validation(Vec<String>),
    #[error("numerical contract violated: {0}")]
    Contract(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serialize(String),
}

struct Bullets<'a>(&'a [String]);

impl fmt::Display for Bullets<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.0 {
            write!(f, "\n  - {line}")?;
        }
        Ok(())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Validation(_) => 3,
            Self::Contract(_) => 4,
            Self::Io(_) | Self::Serialize(_) => 1,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            Self::Usage(_) => "usage",
            Self::Validation(_) => "validation",
            Self::Contract(_) => "numerical-contract",
            Self::Io(_) => "io",
            Self::Serialize(_) => "serialization",
        }
    }
}

/// Bad dimensions, unsupported regimes and size caps come from the
/// configuration; contract failures are numerical.
impl From<qsignal_core::Error> for CliError {
    fn from(e: qsignal_core::Error) -> Self {
        use qsignal_core::Error as E;
        match e {
            E::Dimension(_) | E::Unsupported(_) | E::SizeLimit(_) => {
                Self::Validation(vec![e.to_string()])
            }
            E::Contract(_) | E::ImpossibleOutcome(_) => Self::Contract(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Serialize(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Serialize(e.to_string())
    }
}

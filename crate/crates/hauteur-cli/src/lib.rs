//! Library surface of the `hauteur` command-line tool: the scenario-file and
//! report formats, the reproduce harness, and the error-to-exit-code map.

pub mod report;
pub mod reproduce;
pub mod scenario;

/// CLI-level error carrying its exit code (2 input, 3 domain, 4 precision).
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Domain(String),
    Precision(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) | CliError::Precision(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hauteur::Error> for CliError {
    fn from(e: hauteur::Error) -> Self {
        match e {
            hauteur::Error::InvalidInput(m) => CliError::Input(m),
            hauteur::Error::LimitExceeded(m) => CliError::Input(m),
            hauteur::Error::Domain(m) => CliError::Domain(m),
            hauteur::Error::Precision(m) => CliError::Precision(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Precision(_) => 4,
        }
    }
}

use std::fmt;

/// Anything that stops a command before it can render a verdict: bad
/// flags, unreadable or malformed files, or a wrapped operation failing
/// outright. These exit with status 2. A clean "no" from a checker is
/// not an error; it becomes a report with exit status 1.
#[derive(Debug)]
pub enum CliError {
    Io { path: String, source: std::io::Error },
    Parse { path: String, message: String },
    InvalidFlag(String),
    NotPlottable { dimension: usize },
    Command(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "cannot access {path}: {source}"),
            CliError::Parse { path, message } => write!(f, "cannot parse {path}: {message}"),
            CliError::InvalidFlag(msg) => write!(f, "invalid flags: {msg}"),
            CliError::NotPlottable { dimension } => {
                write!(f, "not plottable: the object lives in dimension {dimension}, plots are planar")
            }
            CliError::Command(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Wraps a library error whose message already explains itself.
pub fn command_error(e: impl fmt::Display) -> CliError {
    CliError::Command(e.to_string())
}

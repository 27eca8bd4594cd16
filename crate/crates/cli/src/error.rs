use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::json;

/// Failure classes, each with its process exit status.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Capacity(String),
    Oracle(String),
    Io { path: PathBuf, message: String },
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Oracle(_) => 4,
            CliError::Io { .. } => 5,
            CliError::Runtime(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Capacity(_) => "capacity",
            CliError::Oracle(_) => "oracle_violation",
            CliError::Io { .. } => "io",
            CliError::Runtime(_) => "runtime",
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), message: err.to_string() }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        let mut v = json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Io { path, .. } = self {
            v["path"] = json!(path.display().to_string());
        }
        v.to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Capacity(m) | CliError::Oracle(m) | CliError::Runtime(m) => {
                f.write_str(m)
            }
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
        }
    }
}

impl From<ergo_core::Error> for CliError {
    fn from(e: ergo_core::Error) -> Self {
        use ergo_core::Error;
        match e {
            Error::Input(m) => CliError::Config(m),
            Error::Capacity(m) => CliError::Capacity(m),
            e @ Error::Rejection { .. } => CliError::Capacity(e.to_string()),
            Error::Numeric(m) => CliError::Runtime(m),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

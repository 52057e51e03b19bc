use serde::Serialize;
use thiserror::Error;

/// CLI failure with the process exit code contract:
/// 2 config error, 3 numeric/domain error, 4 I/O error.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
            CliError::Io(_) => "io",
        }
    }

    /// Single-line machine-parsable error record.
    pub fn record(&self) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            code: i32,
            kind: &'a str,
            message: String,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Record<'a>,
        }
        serde_json::to_string(&Wrapper {
            error: Record {
                code: self.exit_code(),
                kind: self.kind(),
                message: self.to_string(),
            },
        })
        .unwrap_or_else(|_| String::from("{\"error\":{\"code\":1}}"))
    }
}

impl From<dqlg_core::Error> for CliError {
    fn from(e: dqlg_core::Error) -> Self {
        match e {
            dqlg_core::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

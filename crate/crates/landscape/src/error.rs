use serde_json::json;

/// Errors surfaced by the command-line layer.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] landscape_core::Error),
    #[error("malformed JSON: {0}")]
    MalformedJson(serde_json::Error),
    #[error("scope refers to variable {var} but the instance has {n} variables")]
    ScopeRange { var: usize, n: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    PropertyFailure(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Process exit status for each class of outcome.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const BUDGET: i32 = 2;
    pub const PROPERTY: i32 = 3;
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::MalformedJson(_) => "MALFORMED_JSON",
            CliError::ScopeRange { .. } => "SCOPE_RANGE",
            CliError::Io { .. } => "IO",
            CliError::Usage(_) => "USAGE",
            CliError::Csv(_) => "CSV",
            CliError::PropertyFailure(_) => "PROPERTY_FAILURE",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => exit::BUDGET,
            CliError::PropertyFailure(_) => exit::PROPERTY,
            _ => exit::VALIDATION,
        }
    }

    /// The single-line JSON written to standard error.
    pub fn to_json(&self) -> String {
        json!({"error": self.code(), "message": self.to_string()}).to_string()
    }
}

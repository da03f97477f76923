use thiserror::Error;

/// Problems found while reading or validating a scenario.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("map is not orientation-preserving: det = {det:e} at witness {point:?}")]
    Orientation { point: Vec<f64>, det: f64 },

    #[error(transparent)]
    Core(#[from] formbound::Error),
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Invalid { field: field.into(), reason: reason.into() }
    }
}

/// Failure to write an output file.
#[derive(Debug, Error)]
#[error("{path}: {source}")]
pub struct OutputError {
    pub path: String,
    #[source]
    pub source: std::io::Error,
}

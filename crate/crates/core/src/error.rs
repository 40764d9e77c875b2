//! Error type shared by every module in the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration field failed validation. Carries the offending
    /// `section.key` so command-line users get a field-level message.
    #[error("invalid config: {field}: {message}")]
    Config { field: String, message: String },

    /// Bad argument to a library call.
    #[error("invalid argument `{name}`: {message}")]
    InvalidArgument { name: &'static str, message: String },

    /// Shape mismatch between an input and the structure consuming it.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A NaN or infinity appeared in simulation state.
    #[error("non-finite state in layer {layer}, neuron {neuron}, step {step}")]
    NonFiniteState {
        layer: usize,
        neuron: usize,
        step: usize,
    },

    /// A NaN or infinity appeared in a gradient during training.
    #[error("non-finite gradient at epoch {epoch}, training step {step}")]
    NonFiniteGradient { epoch: usize, step: usize },

    /// Dataset-level problem (empty, constant values, bad labels, ...).
    #[error("data error: {0}")]
    Data(String),

    /// A file could not be parsed. Line numbers are 1-based.
    #[error("parse error in {path} line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Metric preconditions (e.g. AUC on a single-class set).
    #[error("metric error: {0}")]
    Metric(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI: 1 usage, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidArgument { .. } => 1,
            Error::Data(_) | Error::Parse { .. } | Error::Io { .. } => 2,
            Error::DimensionMismatch { .. }
            | Error::NonFiniteState { .. }
            | Error::NonFiniteGradient { .. }
            | Error::Metric(_) => 3,
        }
    }
}

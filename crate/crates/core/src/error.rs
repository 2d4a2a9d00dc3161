use std::path::PathBuf;

/// Errors produced by configuration, numerics and output handling.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("unknown configuration key `{key}` (line {line})")]
    UnknownKey { key: String, line: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn with_context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with any attached context removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for configuration and argument errors (as opposed to numerical or I/O failures).
    pub fn is_config_error(&self) -> bool {
        matches!(
            self.root(),
            Error::InvalidConfig { .. } | Error::UnknownKey { .. } | Error::InvalidArgument(_)
        )
    }

    pub fn is_non_convergence(&self) -> bool {
        matches!(self.root(), Error::NonConvergence { .. })
    }
}

use std::io;

/// Failures of a scenario run, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("config error: {0}")]
    Config(String),
    #[error("dimension budget exceeded: {0}")]
    Dimension(String),
    #[error("{context}: {source}")]
    Numerical {
        context: String,
        #[source]
        source: otoc_core::Error,
    },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl SimError {
    pub fn exit_code(&self) -> i32 {
        use otoc_core::Error as E;
        match self {
            SimError::Config(_) | SimError::Io { .. } => 1,
            SimError::Dimension(_) => 2,
            SimError::Numerical { source, .. } => match source {
                E::InvalidParameter(_) | E::SiteOutOfRange { .. } | E::DimensionMismatch(_) => 1,
                _ => 3,
            },
        }
    }
}

/// Attaches scenario context to kernel errors.
pub(crate) trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, SimError>;
}

impl<T> Context<T> for otoc_core::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, SimError> {
        self.map_err(|source| SimError::Numerical { context: what(), source })
    }
}

use std::path::PathBuf;

/// Failures that stop a run before its checks are evaluated.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] circnet_core::Error),
}

impl LabError {
    pub fn config(msg: impl Into<String>) -> Self {
        LabError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }

    /// 1 for failures of a computation, 2 for anything the user can fix in the config.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Core(circnet_core::Error::CheckFailed(_))
            | LabError::Core(circnet_core::Error::NonFinite { .. }) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

use std::path::PathBuf;

use seisclass_core::dataset::DatasetError;
use seisclass_core::eval::EvalError;
use seisclass_core::models::ModelError;
use seisclass_core::preprocess::PreprocessError;
use seisclass_core::signal::SignalError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}: no such file or directory")]
    MissingPath(PathBuf),
    #[error("{path}: {source}")]
    Record {
        path: PathBuf,
        #[source]
        source: SignalError,
    },
    #[error("{0}")]
    Alignment(String),
    #[error("{path}: {message}")]
    Sidecar { path: PathBuf, message: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl CliError {
    /// Stable category name for the error line.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::MissingPath(_) => "missing-path",
            CliError::Record { .. } => "record",
            CliError::Alignment(_) => "alignment",
            CliError::Sidecar { .. } => "sidecar",
            CliError::Dataset(_) => "dataset",
            CliError::Preprocess(_) => "preprocess",
            CliError::Eval(_) => "eval",
            CliError::Model(_) => "model",
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

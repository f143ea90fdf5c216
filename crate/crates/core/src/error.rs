use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("no parsable records under {0}")]
    EmptyCorpus(PathBuf),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("incompatible minhash signatures: {0}")]
    MinHashParams(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("missing artifact {path}: run `{command}` first")]
    MissingArtifact { path: PathBuf, command: String },

    #[error("training diverged: non-finite loss at epoch {epoch}")]
    NonFinite { epoch: usize },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left} vs {right}")]
    Shape {
        op: &'static str,
        left: String,
        right: String,
    },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("lobule count p={p} outside admissible range f={f} <= p < {max}", max = crate::model::MAX_LOBULES)]
    LobuleRange { f: usize, p: usize },

    #[error("ablation variant error: {0}")]
    Variant(String),

    #[error("ingest error in {source_name}: {message}")]
    Ingest { source_name: String, message: String },

    #[error("integrity error for {path}: expected sha256 {expected}, got {actual}")]
    Integrity {
        path: PathBuf,
        expected: String,
        actual: String,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("model file error: {0}")]
    Persistence(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("dataset '{0}' is not available locally; run `alc fetch {0}` first")]
    MissingDataset(String),

    #[error("download failed for {url}: {message}")]
    Download { url: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(op: &'static str, left: impl ToString, right: impl ToString) -> Self {
        Error::Shape {
            op,
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    pub(crate) fn ingest(source_name: impl ToString, message: impl ToString) -> Self {
        Error::Ingest {
            source_name: source_name.to_string(),
            message: message.to_string(),
        }
    }

    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Param(_) | Error::LobuleRange { .. } | Error::Variant(_) => 2,
            Error::Ingest { .. }
            | Error::Integrity { .. }
            | Error::MissingDataset(_)
            | Error::Download { .. }
            | Error::Persistence(_)
            | Error::Io(_) => 3,
            Error::Numeric(_) | Error::InsufficientData(_) | Error::Shape { .. } => 4,
        }
    }
}

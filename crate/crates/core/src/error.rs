use std::path::PathBuf;

use thiserror::Error;

use crate::hierarchy::{NodeId, ValidationReport};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("point {0} is not part of the universe")]
    UnknownPoint(usize),

    #[error("relation queried on the pair ({0}, {0}); only distinct points are compared")]
    SamePoint(usize),

    #[error("invalid hierarchy: {0}")]
    Invalid(ValidationReport),

    #[error("hierarchies cover different point universes (ground truth {ground_truth}, model {model})")]
    UniverseMismatch { ground_truth: usize, model: usize },

    #[error("unknown preset `{0}` (expected s00..s07)")]
    UnknownPreset(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("stick state does not describe the model hierarchy: {0}")]
    StickMismatch(String),

    #[error("{}: parse error at line {line}, column {column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the filesystem rather than by the content
    /// of the inputs.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

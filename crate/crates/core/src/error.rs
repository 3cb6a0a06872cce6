use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the journal-network pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{0}: file is empty")]
    EmptyInput(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("partition length mismatch: expected {expected}, found {found}")]
    PartitionLength { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("need ≥{required} journals, found {found}")]
    TooFewNodes { required: usize, found: usize },

    #[error("both sets are empty; Jaccard dissimilarity is undefined")]
    EmptySets,

    #[error("sizes required for Jaccard recovery")]
    MissingSizes,

    #[error("modularity undefined: graph has no edges")]
    ModularityUndefined,

    #[error("E-I index undefined: graph has no edges")]
    NoEdges,

    #[error("degenerate dissimilarity matrix ({0}): distance variance is zero")]
    DegenerateMatrix(&'static str),

    #[error("Cramér's V undefined for a {rows}x{cols} table")]
    CramersUndefined { rows: usize, cols: usize },

    #[error("Rajski coherence undefined: {0}")]
    RajskiUndefined(&'static str),

    #[error("config: {0}")]
    Config(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_owned(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps the error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

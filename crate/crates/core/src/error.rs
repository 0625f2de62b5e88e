//! Error type shared by every module of the crate.

use crate::LemmaId;

/// Errors produced while parsing trace files, building graphs, or running
/// analytics over them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A line of an input file did not match its grammar.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A dependency referred to the current line or a later one.
    #[error("line {line}: dependency {dep} must be smaller than lemma index {index}")]
    ForwardReference {
        line: usize,
        index: LemmaId,
        dep: LemmaId,
    },

    /// A dependency used the reserved index 0.
    #[error("line {line}: dependency index 0 is out of range (indices are 1-based)")]
    ZeroDependency { line: usize },

    /// A side file referred to a lemma index past the end of the trace.
    #[error("index {index} is out of range for a trace of {len} lemmas")]
    IndexOutOfRange { index: LemmaId, len: usize },

    /// A metric name that none of the score families recognize.
    #[error("unknown metric '{0}'")]
    UnknownMetric(String),

    /// The requested computation needs at least one node.
    #[error("operation requires a non-empty graph")]
    EmptyGraph,

    /// A parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Helper for grammar violations.
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

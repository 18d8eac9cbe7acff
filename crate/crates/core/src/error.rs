use thiserror::Error;

/// Errors produced by any stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A line-oriented input file (JSONL, TSV, CSV) failed to parse.
    #[error("{path}:{line}: {msg}")]
    Malformed {
        path: String,
        line: usize,
        msg: String,
    },

    /// A narration violated a structural invariant.
    #[error("narration {id}: {msg}")]
    Narration { id: String, msg: String },

    /// Bracketed parse string could not be read.
    #[error("parse error at offset {offset}: {msg}")]
    Tree { offset: usize, msg: String },

    /// Precondition or configuration violation.
    #[error("{0}")]
    Invalid(String),

    /// Numerical degeneracy (non-finite input, singular system, ...).
    #[error("{0}")]
    Numeric(String),

    /// Rank correlation is undefined because one input has no rank variance.
    #[error("degenerate ranking: {0}")]
    DegenerateRanking(String),

    /// Serialized model carries an unsupported format version.
    #[error("unsupported model format version {found} (this build reads version {expected})")]
    Version { found: u32, expected: u32 },

    /// Feature names supplied at prediction time do not match the model.
    #[error("feature name mismatch: missing {missing:?}, unexpected {extra:?}")]
    NameMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

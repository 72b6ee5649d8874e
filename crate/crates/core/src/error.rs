use crate::corpus::WordId;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A document was not valid UTF-8. `offset` is the byte offset of the
    /// first invalid byte within the document.
    #[error("document {doc}: invalid UTF-8 at byte offset {offset}")]
    InvalidEncoding { doc: usize, offset: usize },

    /// A word id that does not resolve in the vocabulary.
    #[error("unknown word id {0}")]
    UnknownWord(WordId),

    /// Position outside the sentence.
    #[error("position {position} out of range for sentence of length {len}")]
    PositionOutOfRange { position: usize, len: usize },

    /// A pair of identical words was requested.
    #[error("invalid pair: both sides are word id {0}")]
    IdenticalPair(WordId),

    /// A parameter outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A dump file that does not conform to its format. Line numbers are
    /// 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An index whose recorded corpus digest does not match the corpus it is
    /// being used with.
    #[error("digest mismatch: index built from corpus {expected}, got {found}")]
    DigestMismatch { expected: String, found: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps these onto exit codes through [`Error::is_precondition`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse length vector: {0}")]
    Parse(String),

    #[error("length l_{index} = {value} is not strictly positive")]
    NonPositive { index: usize, value: String },

    #[error("length vector has {0} entries; supported range is 1..={max}", max = crate::MAX_N)]
    UnsupportedSize(usize),

    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("length vectors have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("length vector is not ordered (l_1 <= ... <= l_n required)")]
    NotOrdered,

    #[error("not a permutation of 1..={0}")]
    InvalidPermutation(usize),

    #[error("permutation must fix the last index {0}")]
    PermutationMovesLast(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("length vector is not generic: {0}")]
    NonGeneric(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("resource limit reached: {0}")]
    ResourceLimit(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for violations of an operation's documented input conditions
    /// (as opposed to parse, I/O or malformed-data failures).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NonPositive { .. }
                | Error::UnsupportedSize(_)
                | Error::IndexOutOfRange { .. }
                | Error::SizeMismatch(..)
                | Error::NotOrdered
                | Error::InvalidPermutation(_)
                | Error::PermutationMovesLast(_)
                | Error::Precondition(_)
                | Error::NonGeneric(_)
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::NonPositive { .. } => "non_positive",
            Error::UnsupportedSize(_) => "unsupported_size",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::SizeMismatch(..) => "size_mismatch",
            Error::NotOrdered => "not_ordered",
            Error::InvalidPermutation(_) => "invalid_permutation",
            Error::PermutationMovesLast(_) => "permutation_moves_last",
            Error::Precondition(_) => "precondition",
            Error::NonGeneric(_) => "non_generic",
            Error::Malformed(_) => "malformed",
            Error::ResourceLimit(_) => "resource_limit",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

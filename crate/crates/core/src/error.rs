use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("degenerate vocabulary: need at least 2 distinct categories, got {0}")]
    DegenerateVocabulary(usize),
    #[error("encoder `{0}` requires a supervised target at fit time")]
    MissingTarget(&'static str),
    #[error("MDV requires classification")]
    MdvRequiresClassification,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("requested {requested} but only {available} available")]
    TooMany { requested: usize, available: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("a single class is present; at least 2 are required")]
    SingleClass,
    #[error("class {class} has {count} member(s); stratification needs at least 2")]
    ClassTooSmall { class: usize, count: usize },
    #[error("average precision is undefined without positive labels")]
    NoPositiveLabels,
    #[error("linear system is not positive definite")]
    NotPositiveDefinite,
    #[error("method `{method}`, split {split}: {source}")]
    Cell {
        method: String,
        split: usize,
        source: alloc::boxed::Box<Error>,
    },
}

use thiserror::Error;

use crate::design::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation does not match the run's support: {0}")]
    SupportMismatch(String),
    #[error("pwo vector does not encode a total order: {0}")]
    InconsistentPwo(String),
    #[error("run has no nonzero component")]
    EmptySupport,
    #[error("base run {0} already carries a nonzero pwo vector")]
    AlreadyExpanded(usize),
    #[error("invalid amount: {0}")]
    InvalidAmount(String),
    #[error("design kind {design} does not match model family {family}")]
    KindMismatch { design: String, family: String },
    #[error("model spec error: {0}")]
    Spec(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown name {name:?} (known: {known})")]
    UnknownName { name: String, known: String },
    #[error("singular matrix; dependent columns: {}", .columns.join(", "))]
    SingularMatrix { columns: Vec<String> },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("insufficient residual degrees of freedom: n = {n}, p = {p}")]
    InsufficientDf { n: usize, p: usize },
    #[error("need at least two blocks to check blocking")]
    NothingToCheck,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("design has no runs")]
    EmptyDesign,
    #[error("design failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn singular<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Error::SingularMatrix {
            columns: columns.into_iter().map(Into::into).collect(),
        }
    }
}

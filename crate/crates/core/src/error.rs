use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("semisimple quotient does not split over the base field: {0}")]
    NonSplit(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis {what} fails at degree {degree}")]
    Hypothesis { what: String, degree: i64 },
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

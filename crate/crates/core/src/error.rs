use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{0} is not invertible")]
    Singular(&'static str),

    #[error("inner subspace is not contained in the outer subspace")]
    NotContained,

    #[error("matrix equation has no solution: {0}")]
    Unsolvable(String),

    #[error("input is not in {form}: {reason}")]
    NotInForm { form: &'static str, reason: String },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}

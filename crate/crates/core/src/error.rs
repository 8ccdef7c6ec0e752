use thiserror::Error;

/// Shape of a vector or family: `(n, q)`.
pub type Shape = (usize, u8);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: left is (n={}, q={}), right is (n={}, q={})", .left.0, .left.1, .right.0, .right.1)]
    DimensionMismatch { left: Shape, right: Shape },

    #[error("entry {value} at index {index} exceeds alphabet maximum q={q}")]
    EntryOutOfRange { index: usize, value: u8, q: u8 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("family is not uniform: {0}")]
    NonUniform(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid input at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("construction failed self-verification: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

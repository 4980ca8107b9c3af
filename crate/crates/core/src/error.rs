use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain of the requested operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A hypothesis required by a construction does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Enumerating the requested object would exceed the configured budget.
    #[error("resource budget exceeded: {what} needs {requested}, budget is {budget}")]
    Budget {
        what: &'static str,
        requested: String,
        budget: String,
    },

    #[error("the interval union covers the whole circle")]
    FullCircle,

    /// A measure without certified coefficient error bounds was offered to
    /// an operation that must stay sound.
    #[error("measure coefficients carry no certified error bounds: {0}")]
    MissingErrorBounds(String),

    #[error("linear algebra failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

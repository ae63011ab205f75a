use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Binary series operation on operands carrying different truncation orders.
    #[error("truncation orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },

    /// A coefficient above the truncation order was requested.
    #[error("coefficient of q^{exponent} is beyond truncation order {order}")]
    BeyondOrder { exponent: i64, order: usize },

    /// Mathematically ill-defined input (divergent product, non-unit inverse,
    /// sequence outside the domain of a bijection, violated motion precondition).
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters that violate the constraints of an identity or family.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Unknown names, unsupported sides and similar caller mistakes.
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}

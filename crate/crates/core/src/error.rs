use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("not invertible modulo f")]
    NotInvertible,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("all vectors isotropic")]
    AllIsotropic,
    #[error("operator fails A* = −A")]
    NotInLieAlgebra,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A post-condition check failed inside an algorithm. Never expected.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("additive character parameter must be nonzero")]
    TrivialCharacter,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is a zero divisor of the quadratic algebra")]
    NonInvertible,
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("{what} = {value} exceeds the allowed maximum {max}")]
    RangeExceeded {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("elements live in different star algebras")]
    SpaceMismatch,
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("reflection vector is isotropic")]
    IsotropicInput,
    #[error("vectors do not span an isotropic subspace")]
    NotIsotropic,
    #[error("vectors are linearly dependent")]
    NotIndependent,
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("degenerate generator parameter: {0}")]
    DegenerateParameter(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parameters are outside the stable range: {0}")]
    NotInStableRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

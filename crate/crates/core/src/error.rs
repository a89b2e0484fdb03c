use thiserror::Error;

/// Errors raised by model construction and the algebraic operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element is not hermitian: imaginary part {imag:e} at index {index}")]
    NonHermitian { index: usize, imag: f64 },
    #[error("function undefined at {value}: {reason}")]
    DomainError { value: f64, reason: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("element is not quasi-positive (witness index {index})")]
    NotQuasiPositive { index: usize },
    #[error("product not defined: {0}")]
    NotMultipliable(String),
    #[error("function not in any class C_k with k <= {n}")]
    NotInClass { n: u32 },
    #[error("function fails the decay class: {0}")]
    FClassViolation(String),
    #[error("form is not positive: eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },
    #[error("form is not invariant: a = e_{a}, x = e_{x}, y = e_{y}, residual {residual:e}")]
    NotInvariant { a: usize, x: usize, y: usize, residual: f64 },
    #[error("form is not continuous: best ratio {ratio:e}")]
    NotContinuous { ratio: f64 },
    #[error("element is unbounded on the form support at index {index}")]
    UnboundedOnSupport { index: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

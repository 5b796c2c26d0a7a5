use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("coefficient domain mismatch")]
    DomainMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero polynomial not allowed: {0}")]
    ZeroPolynomial(&'static str),
    #[error("expected F_p coefficients, got integer coefficients")]
    ExpectedFp,
    #[error("expected integer coefficients, got F_p coefficients")]
    ExpectedInt,
    #[error("monomial order is not total")]
    OrderNotTotal,
    #[error("monomial order is not global (1 must be the smallest monomial)")]
    OrderNotGlobal,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter outside domain: {0}")]
    ParamDomain(String),
    #[error("argument outside domain: {0}")]
    ArgDomain(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("quadrature failed: {0}")]
    QuadFail(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("closed form and hypergeometric combination disagree: {0}")]
    InternalMismatch(String),
    #[error("scale fit failed: {0}")]
    FitFailure(String),
    #[error("word does not match a spectral pattern: {0}")]
    PatternMismatch(String),
    #[error("homogeneity violated: {0}")]
    HomogeneityViolation(String),
    #[error("unsupported xi monomial: {0}")]
    UnsupportedMonomial(String),
}

pub type Result<T> = std::result::Result<T, Error>;

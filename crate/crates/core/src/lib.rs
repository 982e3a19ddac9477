//! Exact symbolic computation for unitary Grassmann (exterior) algebras over
//! finite fields: arithmetic in `G(m)`, the free unitary algebra over a
//! countable variable set, structured-term canonical forms, and complete
//! membership decisions (with explicit refuting witnesses) for the ideal of
//! identities and the space of central polynomials, cross-checked by
//! independent brute-force oracles.

pub mod canonical;
pub mod decide;
pub mod field;
pub mod freealg;
pub mod grassmann;
pub mod oracle;
pub mod selftest;
pub mod siderov;

use thiserror::Error as ThisError;

/// Crate-wide error type.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("reduction polynomial is reducible: {0}")]
    Reducible(String),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("division by zero in the field")]
    ZeroInverse,
    #[error("field configurations differ")]
    ConfigMismatch,
    #[error("generator bound mismatch: {0} vs {1}")]
    BoundMismatch(u32, u32),
    #[error("generator bound {0} exceeds the supported maximum {1}")]
    BoundTooLarge(u32, u32),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("expected a polynomial in one variable")]
    NotUnivariate,
    #[error("invalid structured term: {0}")]
    InvalidTerm(String),
    #[error("enumeration bound exceeded ({0} terms)")]
    EnumerationOverflow(usize),
    #[error("substitution instance budget exceeded ({0} instances)")]
    InstanceBudget(usize),
    #[error("rewrite step budget exceeded; the rewrite system did not terminate")]
    RewriteBudget,
    #[error("rewrite rule failed span certification: {0}")]
    RuleCertification(String),
    #[error("internal soundness trap: {0}")]
    SoundnessTrap(String),
    #[error("scalar search exhausted without a nonvanishing point")]
    ScalarSearchFailed,
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

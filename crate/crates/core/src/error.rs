use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("prime ideal is not totally split over {p}")]
    NotSplit { p: u64 },
    #[error("Hensel lift failed: {0}")]
    LiftFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("element is not coprime to the modulus")]
    NotCoprime,
    #[error("pole of the gamma factor at s = {0}")]
    Pole(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("Ramanujan bound violated at ideal {label}: |a| = {value:e} > {bound:e}")]
    BoundViolation { label: String, value: f64, bound: f64 },
    #[error("missing Hecke eigenvalue for prime {0}")]
    MissingPrime(u64),
    #[error("series does not converge at s = {0}")]
    NonConvergent(f64),
    #[error("tail estimate {estimate:e} above tolerance {tol:e}")]
    Tolerance { estimate: f64, tol: f64 },
    #[error("root number modulus {0} deviates from 1")]
    RootNumber(f64),
    #[error("cross-check disagreement: {0}")]
    CrossCheck(String),
    #[error("enumeration box too large: {0} candidate points")]
    BoxOverflow(u128),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

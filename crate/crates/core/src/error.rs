use num_rational::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: n = {left} vs n = {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("class is not a lattice element (non-integral coefficients)")]
    NotLattice,

    #[error("series is not nilpotent (constant term {0})")]
    NotNilpotent(BigRational),

    #[error("series is not unipotent (constant term {0})")]
    NotUnipotent(BigRational),

    #[error("operator does not commute with the canonical operator")]
    NotInCommutant,

    #[error("operator does not preserve the Euler form")]
    NotIsometry,

    #[error("operator is not unipotent up to sign")]
    NotUnipotentUpToSign,

    #[error("logarithm is not an odd polynomial in D: {0}")]
    LogNotOdd(String),

    #[error("twist coefficient a1 = {0} is not an integer")]
    NonIntegralTwist(BigRational),

    #[error("not a lattice isometry: {0}")]
    NotLatticeIsometry(String),

    #[error("dimension n = {n} too small, need n >= {min}")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("search budget of {budget} candidates exhausted after {visited} nodes ({} residues found)", .partial.len())]
    BudgetExceeded {
        budget: u64,
        visited: u64,
        partial: Vec<Vec<BigRational>>,
    },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

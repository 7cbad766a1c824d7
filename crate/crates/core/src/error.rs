use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("weight entry a_{index} = {value} is negative")]
    NegativeWeightEntry { index: usize, value: i64 },
    #[error("empty quiver variety: lambda = {lambda:?} is not dominated by mu = {mu:?}")]
    EmptyVariety { lambda: Vec<usize>, mu: Vec<usize> },
    #[error("dominance violated: {lambda:?} is not <= {mu:?}")]
    DominanceViolation { lambda: Vec<usize>, mu: Vec<usize> },
    #[error("dimension vector recursion produced an invalid v: {0}")]
    NonIntegralOrNegativeV(String),
    #[error("point is not in the zero fiber of the moment map")]
    NotInLambda,
    #[error("matrix is singular")]
    Singular,
    #[error("enumeration budget exceeded: {needed} candidates > limit {limit}")]
    BudgetExceeded { needed: u128, limit: u128 },
    #[error("adapted family is not a basis of the quotient")]
    BasisDegenerate,
    #[error("interpolation mismatch at q = {q}: fitted {fitted}, counted {counted}")]
    InterpolationMismatch { q: u64, fitted: String, counted: u128 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;

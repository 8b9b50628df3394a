use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degree sequence {0:?}: {1}")]
    InvalidDegrees(Vec<usize>, &'static str),

    #[error("invalid partition {0:?}: {1}")]
    InvalidPartition(Vec<usize>, &'static str),

    #[error("shape has {cells} cells, enumeration budget is {budget}; use the bialternant evaluation")]
    EnumerationBudget { cells: usize, budget: usize },

    #[error("expected {expected} points, got {got}")]
    PointCount { expected: usize, got: usize },

    #[error("points are not pairwise distinct (singular Vandermonde)")]
    SingularVandermonde,

    #[error("schur_cap is limited to n <= {max}, got {n}")]
    CapTooLarge { n: usize, max: usize },

    #[error("invalid interpolation problem: {0}")]
    InvalidProblem(String),

    #[error("Schur denominator {0:e} is too small for binary64; retry with exact arithmetic")]
    IllConditioned(f64),

    #[error("Schur denominator vanished")]
    ZeroDenominator,

    #[error("linear system is singular (internal inconsistency)")]
    SingularSystem,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid constraint set: {0}")]
    InvalidConstraints(String),

    #[error("polynomial is not in the feasible class: {0}")]
    Infeasible(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid modulus of continuity: {0}")]
    InvalidModulus(String),

    #[error("lower bound L must be positive, got {0}")]
    NonPositiveL(f64),

    #[error("linear program did not converge: {0}")]
    LpFailure(String),

    #[error("alternation count {count} exceeds grid size {grid}")]
    CountExceedsGrid { count: usize, grid: usize },

    #[error("malformed problem document: {0}")]
    Document(String),
}

use thiserror::Error;

/// Errors raised by the quantile machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("data cloud must contain at least one point of dimension at least one")]
    EmptyData,

    #[error("quantile level {0} is not in the open interval (0, 1)")]
    LevelOutOfRange(String),

    #[error("N*p = {0} is an integer; the minimizer of phi is not unique (hypothesis N*p not integral violated)")]
    IntegralNp(String),

    #[error("cone does not have nonempty interior: generator rank {rank} < dimension {dim}")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("cone is not free of lines")]
    ContainsLine,

    #[error("cone needs at least one generator")]
    NoGenerators,

    #[error("point c is not in the interior of the cone")]
    NotInterior,

    #[error("no coordinate permutation makes the last entry of c nonzero")]
    DegenerateBasis,

    #[error("the basis of the dual cone is empty")]
    EmptyBasis,

    #[error("dual solution has no entries")]
    EmptySolution,

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("exact 2-D oracle requires dimension 2, got {0}")]
    DimensionNot2(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

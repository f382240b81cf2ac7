use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value {0} rejected")]
    NonFinite(f64),

    #[error("dual division undefined: divisor has zero standard part")]
    DivisionUndefined,

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("standard part is singular")]
    SingularStandardPart,

    #[error("stacked dual-part system is rank deficient")]
    RankDeficient,

    #[error("matrix of order {n} exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("{0}")]
    StructureViolation(String),

    #[error("iterate has a non-positive standard component at index {0}")]
    NonPositiveIterate(usize),

    #[error("vector has a non-positive standard component at index {0}")]
    NonPositiveVector(usize),

    #[error("no positive Perron vector found (input not irreducible?)")]
    NoPositivePerronVector,

    #[error("eigenvalue iteration did not converge")]
    EigenNoConvergence,

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("bad example spec: {0}")]
    BadSpec(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

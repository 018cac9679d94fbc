use thiserror::Error;

use crate::geometry::PointId;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("point {0} is not in the domain")]
    NotInDomain(PointId),

    #[error("map is not fixed-point free: witness {0}")]
    NotFixedPointFree(PointId),

    #[error("coloring must be verified before use")]
    UnverifiedInput,

    #[error("unsatisfiable generator spec: {0}")]
    Unsatisfiable(String),

    #[error("unknown suite id: {0}")]
    UnknownSuite(String),

    #[error("resolution must be nonnegative")]
    NegativeResolution,

    #[error("set of size {len} exceeds cardinality bound {bound}")]
    CardinalityBound { len: usize, bound: usize },

    /// Quantities from incompatible quadratic extensions cannot be combined
    /// into a single exact value.
    #[error("incommensurable exact quantities")]
    Incommensurable,

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::lattice::{Coord, Family};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad classes of failure, used by front ends to pick exit codes and HTTP
/// statuses.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller supplied something malformed or inconsistent.
    Validation,
    /// The request is well formed but has no feasible answer (e.g. no cut).
    Infeasible,
    /// A size or enumeration cap would be exceeded.
    Resource,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice region is empty")]
    EmptyLattice,

    #[error("invalid lattice specification: {0}")]
    InvalidSpec(String),

    #[error("defect at {0} lies outside the lattice region")]
    DefectOutsideRegion(Coord),

    #[error("defect at {0} listed more than once")]
    DuplicateDefect(Coord),

    #[error("{family} pattern has {got} bits but the lattice has {expected} rows")]
    BitLengthMismatch { family: Family, expected: usize, got: usize },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("enumeration needs 2^{bits} codes, above the cap of 2^{cap}")]
    EnumerationCap { bits: u32, cap: u32 },

    #[error("invalid circuit depth {depth}: {reason}")]
    InvalidDepth { depth: usize, reason: &'static str },

    #[error("invalid cut path: {0}")]
    InvalidPath(String),

    #[error("cut leaves one side of the lattice empty")]
    DegenerateBipartition,

    #[error("no feasible cut path under the current thresholds")]
    NoFeasibleCut,

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    ScaleCap { what: &'static str, size: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation cancelled")]
    Cancelled,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NoFeasibleCut | Error::DegenerateBipartition => ErrorKind::Infeasible,
            Error::EnumerationCap { .. } | Error::ScaleCap { .. } | Error::Cancelled => ErrorKind::Resource,
            _ => ErrorKind::Validation,
        }
    }
}

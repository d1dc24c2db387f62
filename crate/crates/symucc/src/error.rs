//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed FCIDUMP input or inconsistent auxiliary files.
    #[error("parse error: {0}")]
    Parse(String),

    /// Open-shell or otherwise unsupported reference determinant.
    #[error("unsupported reference: {0}")]
    UnsupportedReference(String),

    /// Orbital / qubit index outside the valid range.
    #[error("index error: {0}")]
    Index(String),

    /// Rotation about the identity Pauli (a pure global phase).
    #[error("degenerate rotation: identity Pauli string carries only a global phase")]
    DegenerateRotation,

    /// A caller broke an operation's pre-condition.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The optimizer produced a non-finite energy.
    #[error("optimizer diverged: {0}")]
    OptimizerDiverged(String),

    /// Problem size exceeds a hard resource cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Point group outside the supported Abelian set.
    #[error("unsupported point group: {0}")]
    UnsupportedGroup(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::lattice::HexCoord;

/// Caller supplied arguments outside an operation's contract.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UsageError {
    #[error("rotation {0} out of range 0..6")]
    BadRotation(u8),
    #[error("symmetry op needs a nonzero displacement")]
    ZeroDisplacement,
    #[error("cell {0} is already occupied")]
    Occupied(HexCoord),
    #[error("cells {0} and {1} are not adjacent")]
    NotAdjacent(HexCoord, HexCoord),
    #[error("{0}")]
    Invalid(String),
}

/// Data that contradicts the substitution tables.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegrityError {
    #[error("overlapping productions disagree at fine cell {0}")]
    ConflictingProduction(HexCoord),
    #[error("no coarse grouping fits the patch at {0}")]
    NoGrouping(HexCoord),
    #[error("patch has no C tiles to anchor a coarse grouping")]
    NoAnchor,
    #[error("refine needs a patch of level at least 1")]
    LevelZero,
    #[error("label chirality disagrees with tile at {0}")]
    LabelChirality(HexCoord),
}

/// Problems reading or validating interchange files.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cell {cell}: {reason}")]
    Cell { cell: HexCoord, reason: String },
    #[error("duplicate coordinate {0}")]
    Duplicate(HexCoord),
    #[error("{0}")]
    Schema(String),
}

//! Tiling engine and analysis toolkit for the hexagonal monotile with
//! black-stripe (R1) and flag (R2) matching rules.

pub mod analysis;
pub mod error;
pub mod forcing;
pub mod io;
pub mod lattice;
pub mod prototile;
pub mod render;
pub mod rings;
pub mod substitution;
pub mod symmetry;

pub use error::{FormatError, IntegrityError, UsageError};
pub use lattice::{
    HexCoord, Motion, Patch, PointGroupElement, SymmetryOp, TileInstance, DIRECTIONS,
};
pub use prototile::{validate_patch, DecorationTable, RuleVerdict, StripeKind, ViolationReport};
pub use substitution::{
    compose, generate, label_environment, refine, Label, LabeledPatch, LabeledTile, Letter,
};

//! JSON interchange for patches.
//!
//! ```json
//! {"level": 0, "cells": [{"q": 0, "r": 0, "rotation": 0, "reflected": false, "label": "C"}]}
//! ```
//!
//! `level` and `label` are optional; labelled files need both. Cells are
//! written in coordinate order so output is stable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::lattice::{HexCoord, Patch, PointGroupElement, TileInstance};
use crate::substitution::{Label, LabeledPatch, LabeledTile};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellRecord {
    pub q: i32,
    pub r: i32,
    pub rotation: u8,
    pub reflected: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    pub cells: Vec<CellRecord>,
}

fn record(t: &TileInstance, label: Option<Label>) -> CellRecord {
    CellRecord {
        q: t.at.q,
        r: t.at.r,
        rotation: t.orient.rotation(),
        reflected: t.orient.reflected(),
        label: label.map(|l| l.to_string()),
    }
}

pub fn write_patch(patch: &Patch) -> String {
    let doc = PatchDocument {
        level: None,
        cells: patch.tiles().map(|t| record(t, None)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("patch documents serialize")
}

pub fn write_labeled(patch: &LabeledPatch) -> String {
    let doc = PatchDocument {
        level: Some(patch.level()),
        cells: patch
            .tiles()
            .map(|t| record(&t.tile, Some(t.label)))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("patch documents serialize")
}

struct Parsed {
    level: Option<u32>,
    cells: Vec<(TileInstance, Option<Label>)>,
}

fn parse(text: &str) -> Result<Parsed, FormatError> {
    let doc: PatchDocument = serde_json::from_str(text)?;
    let mut seen = BTreeSet::new();
    let mut cells = Vec::with_capacity(doc.cells.len());
    for c in doc.cells {
        let at = HexCoord::new(c.q, c.r);
        if !seen.insert(at) {
            return Err(FormatError::Duplicate(at));
        }
        let orient =
            PointGroupElement::try_new(c.rotation, c.reflected).map_err(|e| FormatError::Cell {
                cell: at,
                reason: e.to_string(),
            })?;
        let label = match c.label {
            None => None,
            Some(s) => {
                let l: Label = s
                    .parse()
                    .map_err(|reason| FormatError::Cell { cell: at, reason })?;
                if l.barred != c.reflected {
                    return Err(FormatError::Cell {
                        cell: at,
                        reason: format!("label {l} does not match reflected = {}", c.reflected),
                    });
                }
                Some(l)
            }
        };
        cells.push((TileInstance::new(at, orient), label));
    }
    Ok(Parsed {
        level: doc.level,
        cells,
    })
}

/// Reads any patch document; labels, when present, are checked and dropped.
pub fn read_patch(text: &str) -> Result<Patch, FormatError> {
    let parsed = parse(text)?;
    let mut patch = Patch::new();
    for (t, _) in parsed.cells {
        patch.set(t);
    }
    Ok(patch)
}

/// Reads a document in which every cell is labelled.
pub fn read_labeled(text: &str) -> Result<LabeledPatch, FormatError> {
    let parsed = parse(text)?;
    let mut out = LabeledPatch::new(parsed.level.unwrap_or(0));
    for (t, label) in parsed.cells {
        let label = label.ok_or(FormatError::Cell {
            cell: t.at,
            reason: "missing label".into(),
        })?;
        let tile = LabeledTile::new(t, label).map_err(|e| FormatError::Cell {
            cell: t.at,
            reason: e.to_string(),
        })?;
        out.insert(tile).map_err(|e| FormatError::Cell {
            cell: t.at,
            reason: e.to_string(),
        })?;
    }
    Ok(out)
}

/// Whether a document carries labels on every cell.
pub fn is_labeled(text: &str) -> Result<bool, FormatError> {
    let doc: PatchDocument = serde_json::from_str(text)?;
    Ok(!doc.cells.is_empty() && doc.cells.iter().all(|c| c.label.is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_fields() {
        let err = read_patch(r#"{"cells": [], "extra": 1}"#).unwrap_err();
        assert!(matches!(err, FormatError::Json(_)));
    }

    #[test]
    fn bad_rotation_names_cell() {
        let err =
            read_patch(r#"{"cells": [{"q": 2, "r": -1, "rotation": 6, "reflected": false}]}"#)
                .unwrap_err();
        assert!(err.to_string().contains("(2, -1)"), "{err}");
    }
}

//! The 14-label substitution with linear scale factor 2.
//!
//! A coarse tile at `p` with orientation `g` and label `X` refines into a
//! fine tile at `2p` (same orientation, label `C`, barred with `X`) and six
//! edge tiles at `2p + d_k`. Each edge tile is shared by the two coarse tiles
//! across that edge; either one determines it, and when both are present they
//! must agree.
//!
//! Productions are stored in the coarse tile's frame: entry `kk` describes
//! the edge tile in world direction `g.apply_dir(kk)`, as an orientation
//! relative to `g` plus a letter. The child is barred iff the parent is
//! barred xor the relative orientation is a reflection. Barred productions
//! are the mirror images of unbarred ones, so one table serves both.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::IntegrityError;
use crate::lattice::{HexCoord, Patch, PointGroupElement, TileInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Letter {
    pub const ALL: [Letter; 7] = [
        Letter::A,
        Letter::B,
        Letter::C,
        Letter::D,
        Letter::E,
        Letter::F,
        Letter::G,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        (b'A' + self as u8) as char
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub letter: Letter,
    pub barred: bool,
}

impl Label {
    pub const C: Label = Label {
        letter: Letter::C,
        barred: false,
    };
    pub const C_BAR: Label = Label {
        letter: Letter::C,
        barred: true,
    };

    pub const fn new(letter: Letter, barred: bool) -> Self {
        Label { letter, barred }
    }

    pub fn all() -> impl Iterator<Item = Label> {
        [false, true]
            .into_iter()
            .flat_map(|b| Letter::ALL.into_iter().map(move |l| Label::new(l, b)))
    }

    pub fn bar(self) -> Label {
        Label {
            barred: !self.barred,
            ..self
        }
    }
}

/// Written `A`..`G`, barred as `Abar`..`Gbar`.
impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            self.letter.as_char(),
            if self.barred { "bar" } else { "" }
        )
    }
}

impl FromStr for Label {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (head, barred) = match s.strip_suffix("bar") {
            Some(h) => (h, true),
            None => (s, false),
        };
        let mut chars = head.chars();
        match (chars.next(), chars.next()) {
            (Some(c @ 'A'..='G'), None) => {
                Ok(Label::new(Letter::ALL[(c as u8 - b'A') as usize], barred))
            }
            _ => Err(format!("unknown label {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Child {
    pub rel: PointGroupElement,
    pub letter: Letter,
}

impl Child {
    const fn new(rotation: u8, reflected: bool, letter: Letter) -> Child {
        Child {
            rel: PointGroupElement::new(rotation, reflected),
            letter,
        }
    }

    fn label(self, parent_barred: bool) -> Label {
        Label::new(self.letter, parent_barred ^ self.rel.reflected())
    }
}

use Letter::*;

/// Edge children by canonical direction, for unbarred parents A..G.
#[rustfmt::skip]
const PRODUCTIONS: [[Child; 6]; 7] = [
    [Child::new(0, true, A), Child::new(1, false, F), Child::new(5, true, E), Child::new(0, false, A), Child::new(4, false, E), Child::new(2, true, F)],
    [Child::new(0, true, A), Child::new(1, false, F), Child::new(5, true, E), Child::new(0, false, B), Child::new(4, true, E), Child::new(2, true, G)],
    [Child::new(0, false, A), Child::new(1, false, D), Child::new(5, true, B), Child::new(0, true, A), Child::new(4, false, B), Child::new(2, true, D)],
    [Child::new(0, true, A), Child::new(1, false, G), Child::new(5, false, E), Child::new(0, false, D), Child::new(4, true, E), Child::new(2, true, G)],
    [Child::new(0, true, B), Child::new(1, false, F), Child::new(5, true, E), Child::new(0, false, B), Child::new(4, true, F), Child::new(2, false, G)],
    [Child::new(0, true, B), Child::new(1, false, G), Child::new(5, false, E), Child::new(0, false, D), Child::new(4, true, F), Child::new(2, false, G)],
    [Child::new(0, true, D), Child::new(1, true, G), Child::new(5, false, F), Child::new(0, false, D), Child::new(4, true, F), Child::new(2, false, G)],
];

const fn o(rotation: u8, reflected: bool) -> PointGroupElement {
    PointGroupElement::new(rotation, reflected)
}

const T: bool = true;
const N: bool = false;

/// Radius-1 environments of unbarred tiles: neighbour orientations relative
/// to the tile, by canonical direction. Barred tiles see the same tuples.
#[rustfmt::skip]
const ENVIRONMENTS: &[(Letter, [PointGroupElement; 6])] = &[
    (A, [o(0,N),o(5,T),o(1,N),o(0,N),o(2,T),o(4,N)]),
    (A, [o(0,N),o(5,T),o(1,N),o(0,T),o(2,T),o(4,N)]),
    (A, [o(0,T),o(5,T),o(1,N),o(0,N),o(2,T),o(4,N)]),
    (A, [o(0,T),o(5,T),o(1,N),o(0,T),o(2,T),o(4,N)]),
    (B, [o(0,N),o(5,T),o(4,T),o(2,N),o(2,T),o(4,T)]),
    (B, [o(0,N),o(5,T),o(4,T),o(5,T),o(5,N),o(4,T)]),
    (B, [o(0,T),o(5,T),o(4,T),o(2,N),o(2,T),o(4,T)]),
    (B, [o(0,T),o(5,T),o(4,T),o(5,T),o(5,N),o(4,T)]),
    (C, [o(0,N),o(1,N),o(5,T),o(0,T),o(4,N),o(2,T)]),
    (C, [o(0,T),o(1,N),o(5,N),o(0,N),o(4,T),o(2,N)]),
    (C, [o(0,T),o(1,N),o(5,N),o(0,N),o(4,T),o(2,T)]),
    (C, [o(0,T),o(1,N),o(5,T),o(0,N),o(4,N),o(2,T)]),
    (C, [o(0,T),o(1,N),o(5,T),o(0,N),o(4,T),o(2,N)]),
    (C, [o(0,T),o(1,N),o(5,T),o(0,N),o(4,T),o(2,T)]),
    (C, [o(0,T),o(1,T),o(5,N),o(0,N),o(4,T),o(2,N)]),
    (D, [o(0,N),o(5,N),o(4,T),o(2,T),o(2,T),o(4,T)]),
    (D, [o(0,N),o(5,N),o(4,T),o(5,N),o(5,N),o(4,T)]),
    (D, [o(0,T),o(5,N),o(4,T),o(2,T),o(2,T),o(4,T)]),
    (D, [o(0,T),o(5,N),o(4,T),o(5,N),o(5,N),o(4,T)]),
    (E, [o(1,N),o(2,N),o(4,T),o(5,T),o(5,T),o(1,N)]),
    (E, [o(4,T),o(2,N),o(4,T),o(2,N),o(2,N),o(4,T)]),
    (E, [o(4,T),o(2,N),o(4,T),o(5,T),o(5,T),o(4,T)]),
    (F, [o(1,N),o(2,T),o(4,T),o(5,N),o(5,T),o(1,N)]),
    (F, [o(4,T),o(2,T),o(4,T),o(2,T),o(2,N),o(4,T)]),
    (F, [o(4,T),o(2,T),o(4,T),o(5,N),o(5,T),o(4,T)]),
    (G, [o(1,T),o(2,T),o(4,N),o(5,N),o(5,T),o(1,N)]),
    (G, [o(4,N),o(2,T),o(4,N),o(2,T),o(2,N),o(4,T)]),
    (G, [o(4,N),o(2,T),o(4,N),o(5,N),o(5,T),o(4,T)]),
];

/// The edge children of a label, by canonical direction.
pub fn production(letter: Letter) -> &'static [Child; 6] {
    &PRODUCTIONS[letter.index()]
}

/// Reference environments as `(letter, relative neighbour orientations)`.
pub fn environments() -> &'static [(Letter, [PointGroupElement; 6])] {
    ENVIRONMENTS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledTile {
    pub tile: TileInstance,
    pub label: Label,
}

impl LabeledTile {
    pub fn new(tile: TileInstance, label: Label) -> Result<Self, IntegrityError> {
        if tile.orient.reflected() != label.barred {
            return Err(IntegrityError::LabelChirality(tile.at));
        }
        Ok(LabeledTile { tile, label })
    }

    pub fn at(&self) -> HexCoord {
        self.tile.at
    }

    pub fn orient(&self) -> PointGroupElement {
        self.tile.orient
    }
}

/// Tiles on a lattice of spacing `2^level`, addressed in units of that
/// spacing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledPatch {
    level: u32,
    cells: BTreeMap<HexCoord, LabeledTile>,
}

impl LabeledPatch {
    pub fn new(level: u32) -> Self {
        LabeledPatch {
            level,
            cells: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn insert(&mut self, t: LabeledTile) -> Result<(), IntegrityError> {
        if self.cells.contains_key(&t.at()) {
            return Err(IntegrityError::ConflictingProduction(t.at()));
        }
        self.cells.insert(t.at(), t);
        Ok(())
    }

    pub fn get(&self, c: HexCoord) -> Option<&LabeledTile> {
        self.cells.get(&c)
    }

    pub fn label(&self, c: HexCoord) -> Option<Label> {
        self.cells.get(&c).map(|t| t.label)
    }

    pub fn contains(&self, c: HexCoord) -> bool {
        self.cells.contains_key(&c)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn tiles(&self) -> impl Iterator<Item = &LabeledTile> {
        self.cells.values()
    }

    pub fn to_patch(&self) -> Patch {
        let mut p = Patch::new();
        for t in self.cells.values() {
            p.set(t.tile);
        }
        p
    }

    /// Reflection about the vertical axis: every label flips its bar.
    pub fn mirror(&self) -> LabeledPatch {
        let mut out = LabeledPatch::new(self.level);
        for t in self.cells.values() {
            let tile = TileInstance::new(
                t.at().mirror(),
                PointGroupElement::MIRROR.compose(t.orient()),
            );
            out.cells.insert(
                tile.at,
                LabeledTile {
                    tile,
                    label: t.label.bar(),
                },
            );
        }
        out
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&LabeledTile) -> bool) {
        self.cells.retain(|_, t| keep(t));
    }
}

/// One refinement step.
pub fn refine(coarse: &LabeledPatch) -> Result<LabeledPatch, IntegrityError> {
    if coarse.level == 0 {
        return Err(IntegrityError::LevelZero);
    }
    let parts: Vec<[LabeledTile; 7]> = coarse
        .cells
        .par_iter()
        .map(|(_, t)| refine_tile(t))
        .collect();
    let mut fine = LabeledPatch::new(coarse.level - 1);
    for part in parts {
        for child in part {
            match fine.cells.get(&child.at()) {
                Some(existing) if *existing != child => {
                    return Err(IntegrityError::ConflictingProduction(child.at()));
                }
                Some(_) => {}
                None => {
                    fine.cells.insert(child.at(), child);
                }
            }
        }
    }
    Ok(fine)
}

fn refine_tile(t: &LabeledTile) -> [LabeledTile; 7] {
    let g = t.orient();
    let center = t.at().scale(2);
    let mut out = [LabeledTile {
        tile: TileInstance::new(center, g),
        label: Label::new(Letter::C, t.label.barred),
    }; 7];
    for (kk, child) in production(t.label.letter).iter().enumerate() {
        let at = center.neighbor(g.apply_dir(kk));
        out[kk + 1] = LabeledTile {
            tile: TileInstance::new(at, g.compose(child.rel)),
            label: child.label(t.label.barred),
        };
    }
    out
}

/// A single level-`levels` tile at the origin refined down to level 0.
/// Unbarred seeds start in the identity orientation, barred ones mirrored.
pub fn generate(seed: Label, levels: u32) -> LabeledPatch {
    let g = if seed.barred {
        PointGroupElement::MIRROR
    } else {
        PointGroupElement::IDENTITY
    };
    let mut patch = LabeledPatch::new(levels);
    patch.cells.insert(
        HexCoord::ORIGIN,
        LabeledTile {
            tile: TileInstance::new(HexCoord::ORIGIN, g),
            label: seed,
        },
    );
    for _ in 0..levels {
        patch = refine(&patch).expect("substitution tables are self-consistent");
    }
    patch
}

/// Inverse of [`refine`]. Coarse cells are anchored on the C tiles, which
/// must occupy a single coset `c0 + 2Λ`; the coarse tile at `p` sits over the
/// fine C tile at `c0 + 2p`. Coarse tiles whose letter is not pinned down by
/// the edge tiles present are omitted.
pub fn compose(fine: &LabeledPatch) -> Result<LabeledPatch, IntegrityError> {
    let mut anchor: Option<(i32, i32)> = None;
    for t in fine.cells.values() {
        if t.label.letter == Letter::C {
            let coset = (t.at().q.rem_euclid(2), t.at().r.rem_euclid(2));
            match anchor {
                None => anchor = Some(coset),
                Some(a) if a != coset => return Err(IntegrityError::NoGrouping(t.at())),
                Some(_) => {}
            }
        }
    }
    let (aq, ar) = anchor.ok_or(IntegrityError::NoAnchor)?;
    let c0 = HexCoord::new(aq, ar);
    let on_anchor =
        |c: HexCoord| (c.q - c0.q).rem_euclid(2) == 0 && (c.r - c0.r).rem_euclid(2) == 0;

    // Off-anchor tiles are edge children; anchor cells hold only C tiles.
    for t in fine.cells.values() {
        if t.label.letter != Letter::C && on_anchor(t.at()) {
            return Err(IntegrityError::NoGrouping(t.at()));
        }
    }

    let mut coarse = LabeledPatch::new(fine.level + 1);
    for t in fine.cells.values().filter(|t| t.label.letter == Letter::C) {
        let g = t.orient();
        let mut candidates: Vec<Letter> = Vec::new();
        'letters: for letter in Letter::ALL {
            for (kk, child) in production(letter).iter().enumerate() {
                let at = t.at().neighbor(g.apply_dir(kk));
                if let Some(f) = fine.cells.get(&at) {
                    if f.orient() != g.compose(child.rel) || f.label != child.label(t.label.barred)
                    {
                        continue 'letters;
                    }
                }
            }
            candidates.push(letter);
        }
        if candidates.is_empty() {
            return Err(IntegrityError::NoGrouping(t.at()));
        }
        if candidates.len() == 1 {
            let p = HexCoord::new((t.at().q - c0.q) / 2, (t.at().r - c0.r) / 2);
            coarse.cells.insert(
                p,
                LabeledTile {
                    tile: TileInstance::new(p, g),
                    label: Label::new(candidates[0], t.label.barred),
                },
            );
        }
    }
    Ok(coarse)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EnvironmentError {
    #[error("no tile at {0}")]
    Empty(HexCoord),
    #[error("neighbourhood of {at} does not match any reference environment")]
    Unrecognized { at: HexCoord },
    #[error("neighbourhood of {at} is insufficient: candidates {candidates:?}")]
    Undetermined {
        at: HexCoord,
        candidates: Vec<Label>,
    },
}

/// Classifies the tile at `c` by its radius-1 environment. Missing
/// neighbours match anything; the answer is returned only when unique.
pub fn label_environment(patch: &Patch, c: HexCoord) -> Result<Label, EnvironmentError> {
    let g = patch.orient(c).ok_or(EnvironmentError::Empty(c))?;
    let inv = g.inverse();
    let seen: [Option<PointGroupElement>; 6] = std::array::from_fn(|kk| {
        patch
            .orient(c.neighbor(g.apply_dir(kk)))
            .map(|h| inv.compose(h))
    });
    let mut letters: Vec<Letter> = ENVIRONMENTS
        .iter()
        .filter(|(_, env)| (0..6).all(|kk| seen[kk].is_none_or(|s| s == env[kk])))
        .map(|(l, _)| *l)
        .collect();
    letters.dedup();
    let barred = g.reflected();
    match letters.as_slice() {
        [] => Err(EnvironmentError::Unrecognized { at: c }),
        [l] => Ok(Label::new(*l, barred)),
        many => Err(EnvironmentError::Undetermined {
            at: c,
            candidates: many.iter().map(|&l| Label::new(l, barred)).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_text_round_trip() {
        for l in Label::all() {
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
        assert!("H".parse::<Label>().is_err());
        assert!("Cbarbar".parse::<Label>().is_err());
    }

    #[test]
    fn fourteen_labels() {
        assert_eq!(Label::all().count(), 14);
    }

    #[test]
    fn single_refinement_keeps_center() {
        let p = generate(Label::C, 1);
        assert_eq!(p.len(), 7);
        assert_eq!(p.label(HexCoord::ORIGIN), Some(Label::C));
    }

    #[test]
    fn environments_sorted_by_letter() {
        let mut letters: Vec<Letter> = ENVIRONMENTS.iter().map(|e| e.0).collect();
        let before = letters.clone();
        letters.sort();
        assert_eq!(letters, before);
    }
}

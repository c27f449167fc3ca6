//! Exact hexagonal-lattice geometry.
//!
//! Tiles are flat-top hexagons whose centers sit on a triangular lattice
//! addressed by axial coordinates `(q, r)`. The world position of `(q, r)` is
//! `q * a + r * b` with `a` at 0° and `b` at 60°, both of unit length
//! (the center-to-center spacing). Edge `k` of a hexagon faces world angle
//! `60k`; vertex `j` sits at `60j + 30`, between edges `j` and `j + 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::UsageError;

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct HexCoord {
    pub q: i32,
    pub r: i32,
}

/// Unit steps across edges 0..5, counterclockwise from +q.
pub const DIRECTIONS: [HexCoord; 6] = [
    HexCoord { q: 1, r: 0 },
    HexCoord { q: 0, r: 1 },
    HexCoord { q: -1, r: 1 },
    HexCoord { q: -1, r: 0 },
    HexCoord { q: 0, r: -1 },
    HexCoord { q: 1, r: -1 },
];

impl HexCoord {
    pub const ORIGIN: HexCoord = HexCoord { q: 0, r: 0 };

    pub const fn new(q: i32, r: i32) -> Self {
        HexCoord { q, r }
    }

    pub fn neighbor(self, dir: usize) -> HexCoord {
        self + DIRECTIONS[dir % 6]
    }

    pub fn neighbors(self) -> [HexCoord; 6] {
        DIRECTIONS.map(|d| self + d)
    }

    /// Index of the edge direction leading to `other`, if adjacent.
    pub fn direction_to(self, other: HexCoord) -> Option<usize> {
        let d = other - self;
        DIRECTIONS.iter().position(|&e| e == d)
    }

    /// Sum of the two edge steps flanking vertex `j`: the offset, three
    /// times over, of the vertex from the tile center.
    pub fn vertex_step(j: usize) -> HexCoord {
        DIRECTIONS[j % 6] + DIRECTIONS[(j + 1) % 6]
    }

    /// Lattice (hop) distance.
    pub fn distance(self, other: HexCoord) -> u32 {
        let d = other - self;
        let s = -(d.q + d.r);
        d.q.unsigned_abs()
            .max(d.r.unsigned_abs())
            .max(s.unsigned_abs())
    }

    pub fn length(self) -> u32 {
        HexCoord::ORIGIN.distance(self)
    }

    /// Exact squared Euclidean length in units of the center spacing.
    pub fn norm_sq(self) -> i64 {
        let (q, r) = (self.q as i64, self.r as i64);
        q * q + q * r + r * r
    }

    /// Rotation by `k` sextants (60° each) about the origin.
    pub fn rotate(self, k: u8) -> HexCoord {
        let mut c = self;
        for _ in 0..(k % 6) {
            c = HexCoord::new(-c.r, c.q + c.r);
        }
        c
    }

    /// Reflection about the vertical world axis.
    pub fn mirror(self) -> HexCoord {
        HexCoord::new(-self.q - self.r, self.r)
    }

    pub fn scale(self, k: i32) -> HexCoord {
        HexCoord::new(self.q * k, self.r * k)
    }

    /// Floating-point world position; only for rendering.
    pub fn world(self) -> (f64, f64) {
        let s3 = 3f64.sqrt();
        (
            self.q as f64 + 0.5 * self.r as f64,
            0.5 * s3 * self.r as f64,
        )
    }

    /// The cells at exactly `radius` hops, counterclockwise starting from
    /// `radius * DIRECTIONS[0]`.
    pub fn ring(self, radius: u32) -> Vec<HexCoord> {
        if radius == 0 {
            return vec![self];
        }
        let mut out = Vec::with_capacity(6 * radius as usize);
        let mut c = self + DIRECTIONS[0].scale(radius as i32);
        for side in 0..6 {
            let step = DIRECTIONS[(side + 2) % 6];
            for _ in 0..radius {
                out.push(c);
                c = c + step;
            }
        }
        out
    }

    /// All cells within `radius` hops, ring by ring.
    pub fn spiral(self, radius: u32) -> Vec<HexCoord> {
        (0..=radius).flat_map(|k| self.ring(k)).collect()
    }
}

impl Add for HexCoord {
    type Output = HexCoord;
    fn add(self, o: HexCoord) -> HexCoord {
        HexCoord::new(self.q + o.q, self.r + o.r)
    }
}

impl Sub for HexCoord {
    type Output = HexCoord;
    fn sub(self, o: HexCoord) -> HexCoord {
        HexCoord::new(self.q - o.q, self.r - o.r)
    }
}

impl Neg for HexCoord {
    type Output = HexCoord;
    fn neg(self) -> HexCoord {
        HexCoord::new(-self.q, -self.r)
    }
}

impl Mul<HexCoord> for i32 {
    type Output = HexCoord;
    fn mul(self, c: HexCoord) -> HexCoord {
        c.scale(self)
    }
}

impl fmt::Display for HexCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.r)
    }
}

/// One of the 12 orientations: `x -> Rot(rotation) * Mirror^reflected * x`,
/// where `Mirror` reflects about the vertical axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PointGroupElement {
    rotation: u8,
    reflected: bool,
}

impl PointGroupElement {
    pub const IDENTITY: PointGroupElement = PointGroupElement {
        rotation: 0,
        reflected: false,
    };
    pub const MIRROR: PointGroupElement = PointGroupElement {
        rotation: 0,
        reflected: true,
    };

    pub const fn new(rotation: u8, reflected: bool) -> Self {
        PointGroupElement {
            rotation: rotation % 6,
            reflected,
        }
    }

    pub fn try_new(rotation: u8, reflected: bool) -> Result<Self, UsageError> {
        if rotation >= 6 {
            return Err(UsageError::BadRotation(rotation));
        }
        Ok(PointGroupElement {
            rotation,
            reflected,
        })
    }

    pub const fn rotation(self) -> u8 {
        self.rotation
    }

    pub const fn reflected(self) -> bool {
        self.reflected
    }

    /// Dense index 0..12: rotations first, then reflections.
    pub const fn index(self) -> usize {
        self.rotation as usize + if self.reflected { 6 } else { 0 }
    }

    pub const fn from_index(i: usize) -> Self {
        PointGroupElement {
            rotation: (i % 6) as u8,
            reflected: i >= 6,
        }
    }

    pub fn all() -> impl Iterator<Item = PointGroupElement> {
        (0..12).map(PointGroupElement::from_index)
    }

    /// `self` after `other`.
    pub fn compose(self, other: PointGroupElement) -> PointGroupElement {
        let rot = if self.reflected {
            (6 + self.rotation - other.rotation) % 6
        } else {
            (self.rotation + other.rotation) % 6
        };
        PointGroupElement {
            rotation: rot,
            reflected: self.reflected ^ other.reflected,
        }
    }

    pub fn inverse(self) -> PointGroupElement {
        if self.reflected {
            self
        } else {
            PointGroupElement {
                rotation: (6 - self.rotation) % 6,
                reflected: false,
            }
        }
    }

    /// Image of edge direction `k`.
    pub fn apply_dir(self, k: usize) -> usize {
        let k = k % 6;
        let base = if self.reflected { (9 - k) % 6 } else { k };
        (base + self.rotation as usize) % 6
    }

    /// Image of vertex index `j`.
    pub fn apply_vertex(self, j: usize) -> usize {
        let j = j % 6;
        let base = if self.reflected { (8 - j) % 6 } else { j };
        (base + self.rotation as usize) % 6
    }

    /// Image of a direction measured in 30° units (0..12).
    pub fn apply_dir12(self, d: usize) -> usize {
        let d = d % 12;
        let base = if self.reflected { (18 - d) % 12 } else { d };
        (base + 2 * self.rotation as usize) % 12
    }

    pub fn apply(self, c: HexCoord) -> HexCoord {
        let c = if self.reflected { c.mirror() } else { c };
        c.rotate(self.rotation)
    }
}

#[derive(Serialize, Deserialize)]
struct PointGroupRepr {
    rotation: u8,
    reflected: bool,
}

impl Serialize for PointGroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointGroupRepr {
            rotation: self.rotation,
            reflected: self.reflected,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointGroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PointGroupRepr::deserialize(d)?;
        PointGroupElement::try_new(r.rotation, r.reflected).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PointGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            self.rotation,
            if self.reflected { "m" } else { "" }
        )
    }
}

/// A rigid motion `x -> point * x + translation` that maps lattice to lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Motion {
    pub point: PointGroupElement,
    pub translation: HexCoord,
}

impl Motion {
    pub const IDENTITY: Motion = Motion {
        point: PointGroupElement::IDENTITY,
        translation: HexCoord::ORIGIN,
    };

    pub fn new(point: PointGroupElement, translation: HexCoord) -> Self {
        Motion { point, translation }
    }

    pub fn translation(e: HexCoord) -> Self {
        Motion {
            point: PointGroupElement::IDENTITY,
            translation: e,
        }
    }

    pub fn point(g: PointGroupElement) -> Self {
        Motion {
            point: g,
            translation: HexCoord::ORIGIN,
        }
    }

    /// `self` after `other`.
    pub fn compose(self, other: Motion) -> Motion {
        Motion {
            point: self.point.compose(other.point),
            translation: self.point.apply(other.translation) + self.translation,
        }
    }

    pub fn inverse(self) -> Motion {
        let inv = self.point.inverse();
        Motion {
            point: inv,
            translation: -inv.apply(self.translation),
        }
    }

    pub fn apply(self, c: HexCoord) -> HexCoord {
        self.point.apply(c) + self.translation
    }

    pub fn apply_tile(self, t: TileInstance) -> TileInstance {
        TileInstance {
            at: self.apply(t.at),
            orient: self.point.compose(t.orient),
        }
    }

    pub fn apply_patch(self, p: &Patch) -> Patch {
        let mut out = Patch::new();
        for t in p.tiles() {
            out.set(self.apply_tile(*t));
        }
        out
    }
}

/// A candidate partial translational symmetry: a motion with nonzero
/// displacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymmetryOp {
    motion: Motion,
}

impl SymmetryOp {
    pub fn new(point: PointGroupElement, displacement: HexCoord) -> Result<Self, UsageError> {
        if displacement == HexCoord::ORIGIN {
            return Err(UsageError::ZeroDisplacement);
        }
        Ok(SymmetryOp {
            motion: Motion::new(point, displacement),
        })
    }

    pub fn translation(displacement: HexCoord) -> Result<Self, UsageError> {
        SymmetryOp::new(PointGroupElement::IDENTITY, displacement)
    }

    pub fn point(self) -> PointGroupElement {
        self.motion.point
    }

    pub fn displacement(self) -> HexCoord {
        self.motion.translation
    }

    pub fn motion(self) -> Motion {
        self.motion
    }

    pub fn spacing_sq(self) -> i64 {
        self.displacement().norm_sq()
    }

    pub fn spacing(self) -> f64 {
        (self.spacing_sq() as f64).sqrt()
    }

    pub fn inverse(self) -> Motion {
        self.motion.inverse()
    }

    pub fn apply(self, t: TileInstance) -> TileInstance {
        self.motion.apply_tile(t)
    }
}

impl From<SymmetryOp> for Motion {
    fn from(op: SymmetryOp) -> Motion {
        op.motion
    }
}

impl TryFrom<Motion> for SymmetryOp {
    type Error = UsageError;
    fn try_from(m: Motion) -> Result<Self, UsageError> {
        SymmetryOp::new(m.point, m.translation)
    }
}

/// Composition of motions or symmetry ops, `a` after `b`.
pub fn compose_ops(a: impl Into<Motion>, b: impl Into<Motion>) -> Motion {
    a.into().compose(b.into())
}

pub fn apply_op(op: impl Into<Motion>, t: TileInstance) -> TileInstance {
    op.into().apply_tile(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TileInstance {
    pub at: HexCoord,
    pub orient: PointGroupElement,
}

impl TileInstance {
    pub fn new(at: HexCoord, orient: PointGroupElement) -> Self {
        TileInstance { at, orient }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub min_q: i32,
    pub max_q: i32,
    pub min_r: i32,
    pub max_r: i32,
}

/// A finite partial tiling: at most one tile per cell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Patch {
    cells: BTreeMap<HexCoord, TileInstance>,
}

impl Patch {
    pub fn new() -> Self {
        Patch::default()
    }

    pub fn from_tiles(tiles: impl IntoIterator<Item = TileInstance>) -> Result<Self, UsageError> {
        let mut p = Patch::new();
        for t in tiles {
            p.place(t)?;
        }
        Ok(p)
    }

    /// Inserts into an empty cell.
    pub fn place(&mut self, t: TileInstance) -> Result<(), UsageError> {
        if self.cells.contains_key(&t.at) {
            return Err(UsageError::Occupied(t.at));
        }
        self.cells.insert(t.at, t);
        Ok(())
    }

    /// Inserts, replacing any tile already at `t.at`.
    pub fn set(&mut self, t: TileInstance) -> Option<TileInstance> {
        self.cells.insert(t.at, t)
    }

    pub fn remove(&mut self, c: HexCoord) -> Option<TileInstance> {
        self.cells.remove(&c)
    }

    pub fn get(&self, c: HexCoord) -> Option<TileInstance> {
        self.cells.get(&c).copied()
    }

    pub fn orient(&self, c: HexCoord) -> Option<PointGroupElement> {
        self.cells.get(&c).map(|t| t.orient)
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

    /// Tiles in coordinate order.
    pub fn tiles(&self) -> impl Iterator<Item = &TileInstance> {
        self.cells.values()
    }

    pub fn coords(&self) -> impl Iterator<Item = HexCoord> + '_ {
        self.cells.keys().copied()
    }

    pub fn bounds(&self) -> Option<Bounds> {
        let mut it = self.cells.keys();
        let first = it.next()?;
        let mut b = Bounds {
            min_q: first.q,
            max_q: first.q,
            min_r: first.r,
            max_r: first.r,
        };
        for c in it {
            b.min_q = b.min_q.min(c.q);
            b.max_q = b.max_q.max(c.q);
            b.min_r = b.min_r.min(c.r);
            b.max_r = b.max_r.max(c.r);
        }
        Some(b)
    }

    /// True when every cell within `radius` of `c` is occupied.
    pub fn has_full_disk(&self, c: HexCoord, radius: u32) -> bool {
        c.spiral(radius).into_iter().all(|x| self.contains(x))
    }

    /// Cells whose `margin`-disk lies entirely inside the patch.
    pub fn interior(&self, margin: u32) -> Vec<HexCoord> {
        self.coords()
            .filter(|&c| self.has_full_disk(c, margin))
            .collect()
    }

    /// Empty cells adjacent to an occupied one.
    pub fn frontier(&self) -> Vec<HexCoord> {
        let mut out: Vec<HexCoord> = self
            .coords()
            .flat_map(|c| c.neighbors())
            .filter(|c| !self.contains(*c))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_by_six_is_identity() {
        let c = HexCoord::new(3, -7);
        assert_eq!(c.rotate(6), c);
        assert_eq!(c.rotate(3), -c);
    }

    #[test]
    fn dir_action_matches_coordinate_action() {
        for g in PointGroupElement::all() {
            for k in 0..6 {
                assert_eq!(
                    g.apply(DIRECTIONS[k]),
                    DIRECTIONS[g.apply_dir(k)],
                    "{g} {k}"
                );
                let v = HexCoord::vertex_step(k);
                assert_eq!(
                    g.apply(v),
                    HexCoord::vertex_step(g.apply_vertex(k)),
                    "{g} {k}"
                );
            }
        }
    }

    #[test]
    fn dir12_action_is_consistent() {
        for g in PointGroupElement::all() {
            for k in 0..6 {
                assert_eq!(g.apply_dir12(2 * k), 2 * g.apply_dir(k));
                assert_eq!(g.apply_dir12(2 * k + 1), 2 * g.apply_vertex(k) + 1);
            }
        }
    }

    #[test]
    fn mirror_fixes_vertical_axis() {
        // (-1, 2) lies straight up from the origin.
        assert_eq!(HexCoord::new(-1, 2).mirror(), HexCoord::new(-1, 2));
        assert_eq!(HexCoord::new(1, 0).mirror(), HexCoord::new(-1, 0));
    }

    #[test]
    fn spiral_sizes() {
        for r in 0..6u32 {
            let s = HexCoord::ORIGIN.spiral(r);
            assert_eq!(s.len() as u32, 3 * r * (r + 1) + 1);
            assert!(s.iter().all(|c| c.length() <= r));
        }
    }

    #[test]
    fn place_rejects_duplicates() {
        let mut p = Patch::new();
        let t = TileInstance::new(HexCoord::ORIGIN, PointGroupElement::IDENTITY);
        p.place(t).unwrap();
        assert!(p.place(t).is_err());
    }
}

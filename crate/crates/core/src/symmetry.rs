//! Partial translational symmetries and the nonperiodicity classifier.
//!
//! A model exposes a finite window of tiles and a list of candidate ops.
//! An op matches a tile when every image of the tile along the op's orbit
//! that falls inside the window is an identical tile. This is the window
//! surrogate for membership in an invariant infinite subset; tiles whose
//! orbit leaves the window immediately in both directions cannot be
//! checked, stay matched, and are flagged.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::{HexCoord, Patch, PointGroupElement};

/// A candidate op with its displacement in the model's exact integer
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ModelOp {
    pub name: String,
    pub displacement: Vec<i64>,
    /// Exact squared spacing.
    pub spacing_sq: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step<T> {
    Match(T),
    Mismatch,
    Outside,
}

pub trait TilingModel: Sync {
    type Tile: Copy + Ord + Send + Sync + fmt::Debug;

    fn name(&self) -> String;
    /// Dimension `N` of the space the tiling fills.
    fn dimension(&self) -> usize;
    fn tiles(&self) -> Vec<Self::Tile>;
    /// Ops with spacing strictly below `r`; each op and its inverse are
    /// listed once.
    fn candidate_ops(&self, r: i64) -> Vec<ModelOp>;
    /// Image of `t` under `op` (or its inverse when `forward` is false).
    fn step(&self, op: &ModelOp, t: Self::Tile, forward: bool) -> Step<Self::Tile>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matched<T: Ord> {
    pub tiles: BTreeSet<T>,
    /// Matched tiles with no image inside the window either way.
    pub unchecked: BTreeSet<T>,
}

fn orbit_status<M: TilingModel>(model: &M, op: &ModelOp, t: M::Tile) -> Option<bool> {
    let mut checked = false;
    for forward in [true, false] {
        let mut cur = t;
        loop {
            match model.step(op, cur, forward) {
                Step::Match(next) => {
                    checked = true;
                    cur = next;
                }
                Step::Mismatch => return None,
                Step::Outside => break,
            }
        }
    }
    Some(checked)
}

/// Tiles of the window matched by `op`.
pub fn matched_set<M: TilingModel>(model: &M, op: &ModelOp) -> Matched<M::Tile> {
    let mut tiles = BTreeSet::new();
    let mut unchecked = BTreeSet::new();
    for t in model.tiles() {
        if let Some(checked) = orbit_status(model, op, t) {
            tiles.insert(t);
            if !checked {
                unchecked.insert(t);
            }
        }
    }
    Matched { tiles, unchecked }
}

/// Rank over the integers (equivalently the rationals) of a set of
/// displacement vectors: the largest number of them no one of which is an
/// integer combination of the others' multiples.
pub fn independent_count(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in &mut rows {
        r.resize(width, 0);
    }
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let (a, b) = (pivot[col], row[col]);
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = *x * a - p * b;
                }
                let g = row.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    for x in row.iter_mut() {
                        *x /= g;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParticipationBound {
    pub r: i64,
    pub count: usize,
    pub witnesses: Vec<ModelOp>,
    /// Some surviving op could not be checked inside the window.
    pub flagged: bool,
}

/// Matched sets for every candidate op below `r`, computed once.
pub struct OpTable<T: Ord> {
    pub r: i64,
    pub ops: Vec<ModelOp>,
    pub matched: Vec<Matched<T>>,
}

impl<T: Ord + Copy + Send + Sync> OpTable<T> {
    pub fn build<M: TilingModel<Tile = T>>(model: &M, r: i64) -> OpTable<T> {
        let ops = model.candidate_ops(r);
        let matched = ops.par_iter().map(|op| matched_set(model, op)).collect();
        OpTable { r, ops, matched }
    }

    pub fn bound(&self, t: T) -> ParticipationBound {
        let mut witnesses = Vec::new();
        let mut flagged = false;
        for (op, m) in self.ops.iter().zip(&self.matched) {
            if m.tiles.contains(&t) {
                witnesses.push(op.clone());
                flagged |= m.unchecked.contains(&t);
            }
        }
        let vecs: Vec<Vec<i64>> = witnesses.iter().map(|o| o.displacement.clone()).collect();
        ParticipationBound {
            r: self.r,
            count: independent_count(&vecs),
            witnesses,
            flagged,
        }
    }

    /// Ops matching every tile of `sample`.
    pub fn global_ops(&self, sample: &[T]) -> Vec<&ModelOp> {
        self.ops
            .iter()
            .zip(&self.matched)
            .filter(|(_, m)| sample.iter().all(|t| m.tiles.contains(t)))
            .map(|(o, _)| o)
            .collect()
    }
}

pub fn participation_bound<M: TilingModel>(model: &M, t: M::Tile, r: i64) -> ParticipationBound {
    OpTable::build(model, r).bound(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SampleSpec {
    All,
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusReport {
    pub r: i64,
    pub fraction_below_n: f64,
    pub below_n: usize,
    pub sample_size: usize,
    /// Sampled tiles whose bound relies on an unchecked op.
    pub flagged: usize,
    /// Rank of the ops matching every sampled tile.
    pub global_rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NonperiodicEvidence,
    FailsNonperiodicity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Periodicity {
    /// `N` independent ops match every sampled tile.
    Periodic,
    /// Every tile has `N` independent witnesses, but no common set.
    Heterogeneous,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub model: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub radii: Vec<RadiusReport>,
    pub verdict: Verdict,
    pub periodicity: Periodicity,
    /// No candidate op matched any tile at any radius.
    pub maximally_nonperiodic: bool,
}

impl fmt::Display for VerdictRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.verdict, self.periodicity) {
            (Verdict::NonperiodicEvidence, _) if self.maximally_nonperiodic => {
                write!(f, "nonperiodic evidence (maximally nonperiodic)")
            }
            (Verdict::NonperiodicEvidence, _) => write!(f, "nonperiodic evidence"),
            (Verdict::FailsNonperiodicity, Periodicity::Heterogeneous) => {
                write!(f, "fails nonperiodicity: heterogeneously periodic")
            }
            (Verdict::FailsNonperiodicity, Periodicity::Periodic) => {
                write!(f, "fails nonperiodicity: periodic")
            }
            (Verdict::FailsNonperiodicity, Periodicity::Neither) => {
                write!(f, "fails nonperiodicity")
            }
        }
    }
}

pub fn sample_tiles<T: Copy + Ord>(mut tiles: Vec<T>, spec: &SampleSpec) -> Vec<T> {
    tiles.sort();
    match spec {
        SampleSpec::All => tiles,
        SampleSpec::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            tiles.shuffle(&mut rng);
            tiles.truncate(*count);
            tiles.sort();
            tiles
        }
    }
}

/// Fraction of sampled tiles with fewer than `n` independent witnesses at
/// each radius. The fraction being nonzero at every radius is reported as
/// nonperiodic evidence; every tile reaching `n` fails nonperiodicity.
pub fn classify<M: TilingModel>(
    model: &M,
    n: usize,
    radii: &[i64],
    sample: &SampleSpec,
) -> VerdictRecord {
    assert!(!radii.is_empty(), "classify needs at least one radius");
    let tiles = sample_tiles(model.tiles(), sample);
    let mut reports = Vec::new();
    let mut any_match = false;
    let mut periodic = false;
    for &r in radii {
        let table = OpTable::build(model, r);
        any_match |= table.matched.iter().any(|m| !m.tiles.is_empty());
        let bounds: Vec<ParticipationBound> = tiles.par_iter().map(|t| table.bound(*t)).collect();
        let below = bounds.iter().filter(|b| b.count < n).count();
        let global: Vec<Vec<i64>> = table
            .global_ops(&tiles)
            .iter()
            .map(|o| o.displacement.clone())
            .collect();
        let global_rank = independent_count(&global);
        periodic |= global_rank >= n;
        reports.push(RadiusReport {
            r,
            fraction_below_n: if tiles.is_empty() {
                0.0
            } else {
                below as f64 / tiles.len() as f64
            },
            below_n: below,
            sample_size: tiles.len(),
            flagged: bounds.iter().filter(|b| b.flagged).count(),
            global_rank,
        });
    }
    let all_reach = reports.iter().any(|r| r.below_n == 0);
    let verdict = if reports.iter().all(|r| r.below_n > 0) {
        Verdict::NonperiodicEvidence
    } else {
        Verdict::FailsNonperiodicity
    };
    let periodicity = if periodic {
        Periodicity::Periodic
    } else if all_reach {
        Periodicity::Heterogeneous
    } else {
        Periodicity::Neither
    };
    VerdictRecord {
        model: model.name(),
        n,
        radii: reports,
        verdict,
        periodicity,
        maximally_nonperiodic: !any_match,
    }
}

/// `2^v` for the largest power of two dividing `p`; `None` at the blank
/// position 0.
pub fn ruler_value(p: i64) -> Option<u64> {
    (p != 0).then(|| 1u64 << p.trailing_zeros())
}

/// The one-dimensional ruler tiling on positions `-halfwidth..=halfwidth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RulerModel {
    pub halfwidth: i64,
}

impl RulerModel {
    pub fn new(halfwidth: i64) -> Self {
        RulerModel { halfwidth }
    }

    pub fn translation(t: i64) -> ModelOp {
        ModelOp {
            name: format!("T({t})"),
            displacement: vec![t],
            spacing_sq: t * t,
        }
    }

    /// Positions whose value is at least `v`, the blank included.
    pub fn count_value_at_least(&self, v: u64) -> usize {
        (-self.halfwidth..=self.halfwidth)
            .filter(|&p| ruler_value(p).is_none_or(|x| x >= v))
            .count()
    }
}

impl TilingModel for RulerModel {
    type Tile = i64;

    fn name(&self) -> String {
        "ruler".into()
    }

    fn dimension(&self) -> usize {
        1
    }

    fn tiles(&self) -> Vec<i64> {
        (-self.halfwidth..=self.halfwidth).collect()
    }

    fn candidate_ops(&self, r: i64) -> Vec<ModelOp> {
        (1..r).map(RulerModel::translation).collect()
    }

    fn step(&self, op: &ModelOp, t: i64, forward: bool) -> Step<i64> {
        let d = if forward {
            op.displacement[0]
        } else {
            -op.displacement[0]
        };
        let next = t + d;
        if next.abs() > self.halfwidth {
            Step::Outside
        } else if ruler_value(next) == ruler_value(t) {
            Step::Match(next)
        } else {
            Step::Mismatch
        }
    }
}

/// A placed hexagonal tiling; tiles are identical when their orientations
/// agree.
pub struct HexModel {
    pub patch: Patch,
    /// Also offer translations composed with the 60° rotation about the
    /// tile centre.
    pub with_rotations: bool,
}

impl HexModel {
    pub fn new(patch: Patch) -> Self {
        HexModel {
            patch,
            with_rotations: false,
        }
    }

    pub fn translation(e: HexCoord) -> ModelOp {
        ModelOp {
            name: format!("T{e}"),
            displacement: vec![e.q as i64, e.r as i64],
            spacing_sq: e.norm_sq(),
        }
    }

    fn op_parts(op: &ModelOp) -> (HexCoord, PointGroupElement) {
        let e = HexCoord::new(op.displacement[0] as i32, op.displacement[1] as i32);
        let g = if op.name.starts_with('R') {
            PointGroupElement::new(1, false)
        } else {
            PointGroupElement::IDENTITY
        };
        (e, g)
    }

    /// Translations `e` with `0 < |e| < r`, one of each `±e` pair, in
    /// increasing spacing.
    pub fn translations(r: i64) -> Vec<HexCoord> {
        let b = r as i32 + 1;
        let mut out: Vec<HexCoord> = (-b..=b)
            .flat_map(|q| (-b..=b).map(move |rr| HexCoord::new(q, rr)))
            .filter(|e| *e != HexCoord::ORIGIN && e.norm_sq() < r * r)
            .filter(|e| (e.r, e.q) > (0, 0))
            .collect();
        out.sort_by_key(|e| (e.norm_sq(), *e));
        out
    }
}

impl TilingModel for HexModel {
    type Tile = HexCoord;

    fn name(&self) -> String {
        "hex".into()
    }

    fn dimension(&self) -> usize {
        2
    }

    fn tiles(&self) -> Vec<HexCoord> {
        self.patch.coords().collect()
    }

    fn candidate_ops(&self, r: i64) -> Vec<ModelOp> {
        let mut ops: Vec<ModelOp> = HexModel::translations(r)
            .into_iter()
            .map(HexModel::translation)
            .collect();
        if self.with_rotations {
            // A 60° rotation about a tile centre followed by a lattice
            // translation: its displacement is the translation part.
            ops.extend(
                HexModel::translations(r)
                    .into_iter()
                    .flat_map(|e| [e, -e])
                    .map(|e| ModelOp {
                        name: format!("R1T{e}"),
                        displacement: vec![e.q as i64, e.r as i64],
                        spacing_sq: e.norm_sq(),
                    }),
            );
        }
        ops
    }

    fn step(&self, op: &ModelOp, t: HexCoord, forward: bool) -> Step<HexCoord> {
        let (e, g) = HexModel::op_parts(op);
        let motion = crate::lattice::Motion::new(g, e);
        let m = if forward { motion } else { motion.inverse() };
        let Some(tile) = self.patch.get(t) else {
            return Step::Outside;
        };
        let image = m.apply_tile(tile);
        match self.patch.orient(image.at) {
            None => Step::Outside,
            Some(o) if o == image.orient => Step::Match(image.at),
            Some(_) => Step::Mismatch,
        }
    }
}

/// Twist between successive layers of the stacked model, as a multiple of
/// π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Twist {
    /// `p/q · π`, with `0 < p/q < 1`.
    Rational { p: u32, q: u32 },
    /// An irrational multiple of π; no two layers share a lattice.
    Irrational,
}

impl Twist {
    pub fn rational(p: u32, q: u32) -> Result<Twist, crate::UsageError> {
        let g = gcd(p as i128, q as i128) as u32;
        let (p, q) = (p / g.max(1), q / g.max(1));
        if p == 0 || p >= q {
            return Err(crate::UsageError::Invalid(format!(
                "twist {p}/{q} of π must lie strictly between 0 and 1"
            )));
        }
        Ok(Twist::Rational { p, q })
    }
}

/// Rhombic layers stacked with a screw: layer `k` is layer 0 rotated by
/// `k·φ` and lifted by `k`. Tiles are `(layer, m, n)` in the layer's own
/// lattice basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScdModel {
    pub twist: Twist,
    pub layers: i64,
    pub halfwidth: i64,
}

impl ScdModel {
    pub fn new(twist: Twist, layers: i64, halfwidth: i64) -> Self {
        ScdModel {
            twist,
            layers,
            halfwidth,
        }
    }

    /// Residue identifying the lattice of layer `k`, up to the lattice's
    /// own rotational symmetry.
    fn frame(&self, k: i64) -> i64 {
        match self.twist {
            Twist::Irrational => k,
            Twist::Rational { p, q } => {
                // Rhombi with a 60° corner tile the triangular lattice,
                // which a 60° turn preserves; a square lattice keeps its
                // frame under 90°; every lattice is symmetric under 180°.
                let sym = match (p, q) {
                    (1, 3) | (2, 3) => 3,
                    (1, 2) => 2,
                    _ => 1,
                };
                (k * (p * sym) as i64).rem_euclid(q as i64)
            }
        }
    }

    /// Residue identifying the orientation of layer `k`'s rhombi.
    fn tile_class(&self, k: i64) -> i64 {
        match self.twist {
            Twist::Irrational => k,
            Twist::Rational { p, q } => (k * p as i64).rem_euclid(q as i64),
        }
    }

    fn frames(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = (0..self.layers).map(|k| self.frame(k)).collect();
        set.into_iter().collect()
    }

    /// Smallest vertical lift mapping every layer onto an identical one.
    pub fn vertical_period(&self) -> Option<i64> {
        (1..=self.layers)
            .find(|&s| (0..self.layers).all(|k| self.tile_class(k + s) == self.tile_class(k)))
    }

    fn decode(&self, op: &ModelOp) -> ScdOp {
        let frames = self.frames();
        let width = 2 * frames.len();
        let vertical = op.displacement[width];
        if vertical != 0 {
            let screw = op.name.starts_with('S');
            return ScdOp::Lift { s: vertical, screw };
        }
        let (i, pair) = op.displacement[..width]
            .chunks(2)
            .enumerate()
            .find(|(_, c)| c[0] != 0 || c[1] != 0)
            .unwrap();
        ScdOp::Shift {
            frame: frames[i],
            a: pair[0],
            b: pair[1],
        }
    }
}

enum ScdOp {
    Shift { frame: i64, a: i64, b: i64 },
    Lift { s: i64, screw: bool },
}

impl TilingModel for ScdModel {
    type Tile = (i64, i64, i64);

    fn name(&self) -> String {
        match self.twist {
            Twist::Irrational => "scd(phi=irrational)".into(),
            Twist::Rational { p: 1, q } => format!("scd(phi=pi/{q})"),
            Twist::Rational { p, q } => format!("scd(phi={p}pi/{q})"),
        }
    }

    fn dimension(&self) -> usize {
        3
    }

    fn tiles(&self) -> Vec<Self::Tile> {
        let w = self.halfwidth;
        (0..self.layers)
            .flat_map(|k| (-w..=w).flat_map(move |m| (-w..=w).map(move |n| (k, m, n))))
            .collect()
    }

    /// Lattice-axis translations inside each layer frame, screws, and pure
    /// vertical lifts. Unit rhombus edge and unit layer height.
    fn candidate_ops(&self, r: i64) -> Vec<ModelOp> {
        let frames = self.frames();
        let width = 2 * frames.len() + 1;
        let mut ops = Vec::new();
        for (i, f) in frames.iter().enumerate() {
            for a in 1..r {
                for (axis, name) in [(0, "a"), (1, "b")] {
                    let mut d = vec![0; width];
                    d[2 * i + axis] = a;
                    ops.push(ModelOp {
                        name: format!("T[{f}]{name}{a}"),
                        displacement: d,
                        spacing_sq: a * a,
                    });
                }
            }
        }
        for s in 1..r {
            let mut d = vec![0; width];
            d[width - 1] = s;
            ops.push(ModelOp {
                name: format!("S^{s}"),
                displacement: d.clone(),
                spacing_sq: s * s,
            });
            ops.push(ModelOp {
                name: format!("V{s}"),
                displacement: d,
                spacing_sq: s * s,
            });
        }
        ops
    }

    fn step(&self, op: &ModelOp, (k, m, n): Self::Tile, forward: bool) -> Step<Self::Tile> {
        let sign = if forward { 1 } else { -1 };
        match self.decode(op) {
            ScdOp::Shift { frame, a, b } => {
                if self.frame(k) != frame {
                    return Step::Mismatch;
                }
                let (m2, n2) = (m + sign * a, n + sign * b);
                if m2.abs() > self.halfwidth || n2.abs() > self.halfwidth {
                    Step::Outside
                } else {
                    Step::Match((k, m2, n2))
                }
            }
            ScdOp::Lift { s, screw } => {
                let k2 = k + sign * s;
                if !(0..self.layers).contains(&k2) {
                    return Step::Outside;
                }
                if screw || self.tile_class(k2) == self.tile_class(k) {
                    Step::Match((k2, m, n))
                } else {
                    Step::Mismatch
                }
            }
        }
    }
}

/// The smallest translation whose matched set is lattice-like, with its
/// repeated motif.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallestSymmetry {
    pub displacement: HexCoord,
    pub spacing_sq: i64,
    /// Tiles per fundamental cell of the lattice generated by the
    /// displacement and its 60° rotation.
    pub motif_size: usize,
    /// Motif tiles per orientation, indexed rotation + 6·reflected.
    pub orientation_census: [usize; 12],
    /// Sizes of the edge-connected clusters making up the motif.
    pub clusters: Vec<usize>,
    /// Every lattice translate of a motif tile inside the checked region is
    /// matched too.
    pub lattice_complete: bool,
    /// Number of matched tiles in the checked region.
    pub matched: usize,
}

/// Residue of `x` modulo the lattice spanned by `e` and its 60° rotation.
fn lattice_residue(x: HexCoord, e: HexCoord) -> HexCoord {
    let (a, b) = (e.q as i64, e.r as i64);
    let det = e.norm_sq();
    let (xq, xr) = (x.q as i64, x.r as i64);
    let s = ((a + b) * xq + b * xr).div_euclid(det);
    let t = (-b * xq + a * xr).div_euclid(det);
    let f = e.rotate(1);
    x - e.scale(s as i32) - f.scale(t as i32)
}

/// Searches translations in increasing spacing. A translation qualifies
/// when some tile is matched jointly by `e`, `Re` and `R²e` (`R` the 60°
/// rotation) with every matched tile having images both ways along each.
/// Only tiles whose `margin`-disk lies inside the patch are considered.
pub fn smallest_spacing_symmetry(
    patch: &Patch,
    max_spacing: i64,
    margin: u32,
) -> Option<SmallestSymmetry> {
    let model = HexModel::new(patch.clone());
    let inner: BTreeSet<HexCoord> = patch.interior(margin).into_iter().collect();
    for e in HexModel::translations(max_spacing) {
        let gens = [e, e.rotate(1), e.rotate(2)];
        let certified = |t: HexCoord| {
            gens.iter()
                .all(|g| patch.contains(t + *g) && patch.contains(t - *g))
        };
        let sets: Vec<BTreeSet<HexCoord>> = gens
            .iter()
            .map(|g| matched_set(&model, &HexModel::translation(*g)).tiles)
            .collect();
        let joint: BTreeSet<HexCoord> = inner
            .iter()
            .copied()
            .filter(|t| certified(*t) && sets.iter().all(|s| s.contains(t)))
            .collect();
        if joint.is_empty() {
            continue;
        }
        let mut classes: BTreeMap<HexCoord, PointGroupElement> = BTreeMap::new();
        for t in &joint {
            classes.insert(lattice_residue(*t, e), patch.orient(*t).unwrap());
        }
        let mut census = [0usize; 12];
        for g in classes.values() {
            census[g.index()] += 1;
        }
        let lattice_complete = joint.iter().all(|t| {
            gens.iter()
                .flat_map(|g| [*t + *g, *t - *g])
                .all(|x| !(inner.contains(&x) && certified(x)) || joint.contains(&x))
        });
        // Clusters: components of the residue classes under adjacency.
        let keys: Vec<HexCoord> = classes.keys().copied().collect();
        let mut comp: BTreeMap<HexCoord, usize> = BTreeMap::new();
        let mut clusters = Vec::new();
        for &k in &keys {
            if comp.contains_key(&k) {
                continue;
            }
            let id = clusters.len();
            let mut stack = vec![k];
            comp.insert(k, id);
            let mut size = 0;
            while let Some(c) = stack.pop() {
                size += 1;
                let rep = joint
                    .iter()
                    .find(|t| lattice_residue(**t, e) == c)
                    .copied()
                    .unwrap();
                for nb in rep.neighbors() {
                    if joint.contains(&nb) {
                        let rc = lattice_residue(nb, e);
                        if let Entry::Vacant(slot) = comp.entry(rc) {
                            slot.insert(id);
                            stack.push(rc);
                        }
                    }
                }
            }
            clusters.push(size);
        }
        clusters.sort_unstable();
        return Some(SmallestSymmetry {
            displacement: e,
            spacing_sq: e.norm_sq(),
            motif_size: classes.len(),
            orientation_census: census,
            clusters,
            lattice_complete,
            matched: joint.len(),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(independent_count(&[]), 0);
        assert_eq!(independent_count(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(independent_count(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(
            independent_count(&[vec![2, 0, 0], vec![0, 3, 0], vec![2, 3, 0], vec![0, 0, 5]]),
            3
        );
    }

    #[test]
    fn ruler_values() {
        assert_eq!(ruler_value(0), None);
        assert_eq!(ruler_value(1), Some(1));
        assert_eq!(ruler_value(8), Some(8));
        assert_eq!(ruler_value(12), Some(4));
        assert_eq!(ruler_value(-6), Some(2));
    }

    #[test]
    fn residues_are_reduced() {
        let e = HexCoord::new(8, 0);
        let mut set = BTreeSet::new();
        for q in -20..20 {
            for r in -20..20 {
                let x = HexCoord::new(q, r);
                let res = lattice_residue(x, e);
                assert_eq!(lattice_residue(res, e), res);
                set.insert(res);
            }
        }
        assert_eq!(set.len(), 64);
    }

    #[test]
    fn translation_list_halves() {
        let t = HexModel::translations(3);
        assert!(t.iter().all(|e| !t.contains(&-*e)));
        // Shells of norm² 1, 3, 4 and 7 hold 6, 6, 6 and 12 vectors.
        assert_eq!(t.len(), 15);
    }
}

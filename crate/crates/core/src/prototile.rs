//! The decorated hexagonal prototile and its two matching rules.
//!
//! The decoration of the canonical orientation is two literal rows:
//!
//! * black: for each edge `k`, the vertex (`k - 1` or `k`) the stripe
//!   crossing sits next to;
//! * flags: for each vertex `j`, which flanking neighbour direction
//!   (`j` or `j + 1`) the vertex's flag leans toward.
//!
//! ```text
//!            v1 _______ v0
//!              /   e1  \               black crossings sit beside
//!          e2 /         \ e0           v0, v1, v1, v2, v4, v4
//!        v2  <           >  v5         on edges e0..e5: stripe e0-e3
//!          e3 \         / e5           plus corners at v1 and v4
//!              \_______/
//!            v3    e4   v4
//! ```
//!
//! Every other orientation's row is derived by the point-group action.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{FormatError, UsageError};
use crate::lattice::{HexCoord, Patch, PointGroupElement, TileInstance, DIRECTIONS};

/// Near vertex of the black crossing on each canonical edge.
pub const BLACK_NEAR: [u8; 6] = [0, 1, 1, 2, 4, 4];

/// Flanking neighbour direction each canonical vertex flag leans toward.
pub const FLAG_NEAR: [u8; 6] = [0, 2, 3, 3, 4, 0];

/// An undirected lattice edge, stored from the cell for which the edge
/// direction is 0, 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub cell: HexCoord,
    pub dir: u8,
}

impl EdgeId {
    pub fn new(a: HexCoord, dir: usize) -> EdgeId {
        let dir = dir % 6;
        if dir < 3 {
            EdgeId {
                cell: a,
                dir: dir as u8,
            }
        } else {
            EdgeId {
                cell: a.neighbor(dir),
                dir: (dir - 3) as u8,
            }
        }
    }

    pub fn between(a: HexCoord, b: HexCoord) -> Result<EdgeId, UsageError> {
        let k = a.direction_to(b).ok_or(UsageError::NotAdjacent(a, b))?;
        Ok(EdgeId::new(a, k))
    }

    pub fn cells(self) -> (HexCoord, HexCoord) {
        (self.cell, self.cell.neighbor(self.dir as usize))
    }
}

/// Three times the world position of vertex `j` of the cell at `c`.
pub fn vertex_id(c: HexCoord, j: usize) -> HexCoord {
    c.scale(3) + HexCoord::vertex_step(j)
}

/// Where a black stripe crosses an edge: `position` is +1 next to the
/// counterclockwise endpoint of the edge as seen from `edge.cell`, -1 next
/// to the other endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StripeCrossing {
    pub edge: EdgeId,
    pub position: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StripeKind {
    Black,
    Purple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecorationTable {
    black_near: [u8; 6],
    flag_near: [u8; 6],
    /// `[orientation][world edge]` -> +1 / -1.
    offsets: [[i8; 6]; 12],
    /// `[orientation][world edge]` -> world vertex next to the crossing.
    black_world: [[u8; 6]; 12],
    /// `[orientation][world vertex]` -> world neighbour direction.
    flag_world: [[u8; 6]; 12],
    /// `[orientation][world vertex]` -> flag direction in 30° units.
    flag_dirs: [[u8; 6]; 12],
    black_segments: [(u8, u8); 3],
    purple_segments: [(u8, u8); 3],
}

impl Default for DecorationTable {
    fn default() -> Self {
        DecorationTable::from_canonical(BLACK_NEAR, FLAG_NEAR)
            .expect("built-in decoration is well formed")
    }
}

impl DecorationTable {
    /// The built-in decoration.
    pub fn canonical() -> &'static DecorationTable {
        static TABLE: std::sync::OnceLock<DecorationTable> = std::sync::OnceLock::new();
        TABLE.get_or_init(DecorationTable::default)
    }

    pub fn from_canonical(black_near: [u8; 6], flag_near: [u8; 6]) -> Result<Self, UsageError> {
        for k in 0..6 {
            let b = black_near[k] as usize;
            if b != k && b != (k + 5) % 6 {
                return Err(UsageError::Invalid(format!(
                    "edge {k}: near vertex {b} is not an endpoint"
                )));
            }
            let f = flag_near[k] as usize;
            if f != k && f != (k + 1) % 6 {
                return Err(UsageError::Invalid(format!(
                    "vertex {k}: flag side {f} does not flank it"
                )));
            }
        }
        let black_segments = pair_ports(&black_near).ok_or_else(|| {
            UsageError::Invalid("black row does not form two corners and a crossing stripe".into())
        })?;
        let purple_segments = pair_ports(&flag_near).ok_or_else(|| {
            UsageError::Invalid("flag row does not form two corners and a crossing stripe".into())
        })?;

        let mut t = DecorationTable {
            black_near,
            flag_near,
            offsets: [[0; 6]; 12],
            black_world: [[0; 6]; 12],
            flag_world: [[0; 6]; 12],
            flag_dirs: [[0; 6]; 12],
            black_segments,
            purple_segments,
        };
        for g in PointGroupElement::all() {
            let gi = g.index();
            for k in 0..6 {
                let e = g.apply_dir(k);
                let v = g.apply_vertex(black_near[k] as usize);
                t.black_world[gi][e] = v as u8;
                t.offsets[gi][e] = if v == e { 1 } else { -1 };

                let w = g.apply_vertex(k);
                let n = g.apply_dir(flag_near[k] as usize);
                t.flag_world[gi][w] = n as u8;
                t.flag_dirs[gi][w] = if n == (w + 1) % 6 {
                    (2 * w + 4) % 12
                } else {
                    (2 * w + 10) % 12
                } as u8;
            }
        }
        Ok(t)
    }

    pub fn black_row(&self) -> [u8; 6] {
        self.black_near
    }

    pub fn flag_row(&self) -> [u8; 6] {
        self.flag_near
    }

    /// Offset of the black crossing along world edge `edge`.
    pub fn stripe_offset(&self, g: PointGroupElement, edge: usize) -> i8 {
        self.offsets[g.index()][edge % 6]
    }

    /// World vertex index beside which the black stripe crosses `edge`.
    pub fn black_near_vertex(&self, g: PointGroupElement, edge: usize) -> usize {
        self.black_world[g.index()][edge % 6] as usize
    }

    /// World direction (30° units) of the flag at world vertex `vertex`.
    pub fn flag_dir(&self, g: PointGroupElement, vertex: usize) -> usize {
        self.flag_dirs[g.index()][vertex % 6] as usize
    }

    /// World neighbour direction the flag at `vertex` leans toward.
    pub fn flag_side(&self, g: PointGroupElement, vertex: usize) -> usize {
        self.flag_world[g.index()][vertex % 6] as usize
    }

    /// Canonical stripe segments as pairs of ports: edges for black,
    /// vertices for purple.
    pub fn segments(&self, kind: StripeKind) -> [(u8, u8); 3] {
        match kind {
            StripeKind::Black => self.black_segments,
            StripeKind::Purple => self.purple_segments,
        }
    }

    /// Segments of a placed tile in world ports.
    pub fn world_segments(&self, kind: StripeKind, g: PointGroupElement) -> [(usize, usize); 3] {
        let map = |p: u8| match kind {
            StripeKind::Black => g.apply_dir(p as usize),
            StripeKind::Purple => g.apply_vertex(p as usize),
        };
        self.segments(kind).map(|(a, b)| (map(a), map(b)))
    }

    pub fn stripe_crossing_world(&self, t: TileInstance, edge: usize) -> StripeCrossing {
        let id = EdgeId::new(t.at, edge);
        let near = vertex_id(t.at, self.black_near_vertex(t.orient, edge));
        let ccw = vertex_id(id.cell, id.dir as usize);
        StripeCrossing {
            edge: id,
            position: if near == ccw { 1 } else { -1 },
        }
    }

    pub fn to_json(&self) -> DecorationJson {
        DecorationJson {
            black_near: self.black_near,
            flag_near: self.flag_near,
            orientations: PointGroupElement::all()
                .map(|g| OrientationRow {
                    rotation: g.rotation(),
                    reflected: g.reflected(),
                    stripe_offset: self.offsets[g.index()],
                    flag_dir: self.flag_dirs[g.index()],
                })
                .collect(),
        }
    }

    /// Rebuilds from the canonical rows and checks that any listed
    /// orientation rows agree with the derived ones.
    pub fn from_json(j: &DecorationJson) -> Result<Self, FormatError> {
        let t = DecorationTable::from_canonical(j.black_near, j.flag_near)
            .map_err(|e| FormatError::Schema(e.to_string()))?;
        for row in &j.orientations {
            let g = PointGroupElement::try_new(row.rotation, row.reflected)
                .map_err(|e| FormatError::Schema(e.to_string()))?;
            if row.stripe_offset != t.offsets[g.index()] || row.flag_dir != t.flag_dirs[g.index()] {
                return Err(FormatError::Schema(format!(
                    "orientation {g} is not the point-group image of the canonical row"
                )));
            }
        }
        Ok(t)
    }
}

/// Pairs six ports into two corners (ports sharing a near value) and a
/// stripe joining the remaining opposite pair.
fn pair_ports(near: &[u8; 6]) -> Option<[(u8, u8); 3]> {
    let mut used = [false; 6];
    let mut corners = Vec::new();
    for a in 0..6 {
        let b = (a + 1) % 6;
        if near[a] == near[b] && !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            corners.push((a as u8, b as u8));
        }
    }
    let rest: Vec<u8> = (0..6u8).filter(|&p| !used[p as usize]).collect();
    if corners.len() != 2 || rest.len() != 2 || rest[1] - rest[0] != 3 {
        return None;
    }
    Some([(rest[0], rest[1]), corners[0], corners[1]])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecorationJson {
    pub black_near: [u8; 6],
    pub flag_near: [u8; 6],
    #[serde(default)]
    pub orientations: Vec<OrientationRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationRow {
    pub rotation: u8,
    pub reflected: bool,
    pub stripe_offset: [i8; 6],
    pub flag_dir: [u8; 6],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleVerdict {
    Satisfied,
    Violated,
    /// A tile the rule instance needs is absent.
    Undetermined(HexCoord),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub edge: EdgeId,
    pub tiles: Vec<HexCoord>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

/// R1 on a pair of orientations, `b` sitting across world edge `k` of `a`.
pub fn r1_allows(
    t: &DecorationTable,
    ga: PointGroupElement,
    gb: PointGroupElement,
    k: usize,
) -> bool {
    let k = k % 6;
    let va = t.black_near_vertex(ga, k);
    let vb = t.black_near_vertex(gb, (k + 3) % 6);
    // Vertex k of a is vertex k+2 of b; vertex k-1 of a is vertex k+3 of b.
    (va == k && vb == (k + 2) % 6) || (va == (k + 5) % 6 && vb == (k + 3) % 6)
}

/// R2 on a pair of orientations, `y` sitting at `x + vertex_step(m)`.
pub fn r2_allows(
    t: &DecorationTable,
    gx: PointGroupElement,
    gy: PointGroupElement,
    m: usize,
) -> bool {
    let m = m % 6;
    t.flag_dir(gx, m) == t.flag_dir(gy, (m + 3) % 6)
}

fn adjacent_dir(a: HexCoord, b: HexCoord) -> Result<usize, UsageError> {
    a.direction_to(b).ok_or(UsageError::NotAdjacent(a, b))
}

pub fn check_r1(patch: &Patch, a: HexCoord, b: HexCoord) -> Result<RuleVerdict, UsageError> {
    check_r1_with(DecorationTable::canonical(), patch, a, b)
}

pub fn check_r1_with(
    t: &DecorationTable,
    patch: &Patch,
    a: HexCoord,
    b: HexCoord,
) -> Result<RuleVerdict, UsageError> {
    let k = adjacent_dir(a, b)?;
    let Some(ta) = patch.get(a) else {
        return Ok(RuleVerdict::Undetermined(a));
    };
    let Some(tb) = patch.get(b) else {
        return Ok(RuleVerdict::Undetermined(b));
    };
    let same = t.stripe_crossing_world(ta, k) == t.stripe_crossing_world(tb, (k + 3) % 6);
    Ok(if same {
        RuleVerdict::Satisfied
    } else {
        RuleVerdict::Violated
    })
}

/// The two tiles whose flags R2 compares across the edge `a -> a + d_k`:
/// `(T_u, vertex of T_u, T_v, vertex of T_v)`.
pub fn r2_witnesses(a: HexCoord, k: usize) -> (HexCoord, usize, HexCoord, usize) {
    let k = k % 6;
    let tu = a + DIRECTIONS[(k + 1) % 6];
    let tv = a + DIRECTIONS[(k + 5) % 6];
    (tu, (k + 4) % 6, tv, (k + 1) % 6)
}

pub fn check_r2(patch: &Patch, a: HexCoord, b: HexCoord) -> Result<RuleVerdict, UsageError> {
    check_r2_with(DecorationTable::canonical(), patch, a, b)
}

pub fn check_r2_with(
    t: &DecorationTable,
    patch: &Patch,
    a: HexCoord,
    b: HexCoord,
) -> Result<RuleVerdict, UsageError> {
    let k = adjacent_dir(a, b)?;
    let (tu, ju, tv, jv) = r2_witnesses(a, k);
    let Some(gu) = patch.orient(tu) else {
        return Ok(RuleVerdict::Undetermined(tu));
    };
    let Some(gv) = patch.orient(tv) else {
        return Ok(RuleVerdict::Undetermined(tv));
    };
    let same = t.flag_dir(gu, ju) == t.flag_dir(gv, jv);
    Ok(if same {
        RuleVerdict::Satisfied
    } else {
        RuleVerdict::Violated
    })
}

pub fn validate_patch(patch: &Patch) -> ViolationReport {
    validate_patch_with(DecorationTable::canonical(), patch)
}

/// Every R1 instance between two present tiles and every R2 instance whose
/// two witnesses are present; edges listed in coordinate order.
pub fn validate_patch_with(t: &DecorationTable, patch: &Patch) -> ViolationReport {
    let mut violations = BTreeSet::new();
    for tile in patch.tiles() {
        let a = tile.at;
        for k in 0..3 {
            let b = a.neighbor(k);
            if let Some(gb) = patch.orient(b) {
                if !r1_allows(t, tile.orient, gb, k) {
                    violations.insert((Rule::R1, EdgeId::new(a, k), vec![a, b]));
                }
            }
            // x = a at vertex m = k, y = a + vertex_step(k); the edge they
            // straddle joins a + d_k and a + d_{k+1}.
            let y = a + HexCoord::vertex_step(k);
            if let Some(gy) = patch.orient(y) {
                if !r2_allows(t, tile.orient, gy, k) {
                    let edge = EdgeId::new(a.neighbor(k), (k + 2) % 6);
                    violations.insert((Rule::R2, edge, vec![a, y]));
                }
            }
        }
    }
    ViolationReport {
        violations: violations
            .into_iter()
            .map(|(rule, edge, tiles)| Violation { rule, edge, tiles })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_segments() {
        let t = DecorationTable::canonical();
        assert_eq!(t.segments(StripeKind::Black), [(0, 3), (1, 2), (4, 5)]);
        assert_eq!(t.segments(StripeKind::Purple), [(1, 4), (2, 3), (5, 0)]);
    }

    #[test]
    fn mirror_negates_offsets() {
        let t = DecorationTable::canonical();
        for g in PointGroupElement::all() {
            let m = PointGroupElement::MIRROR.compose(g);
            for e in 0..6 {
                let image = PointGroupElement::MIRROR.apply_dir(e);
                assert_eq!(t.stripe_offset(m, image), -t.stripe_offset(g, e));
            }
        }
    }

    #[test]
    fn r2_witnesses_straddle_the_edge() {
        for k in 0..6 {
            let (tu, ju, tv, jv) = r2_witnesses(HexCoord::ORIGIN, k);
            assert_eq!(tv + HexCoord::vertex_step(jv), tu);
            assert_eq!((jv + 3) % 6, ju);
            let (a, b) = (HexCoord::ORIGIN, HexCoord::ORIGIN.neighbor(k));
            assert_eq!(tu.distance(a), 1);
            assert_eq!(tu.distance(b), 1);
            assert_eq!(tv.distance(a), 1);
            assert_eq!(tv.distance(b), 1);
        }
    }

    #[test]
    fn json_round_trip() {
        let t = DecorationTable::canonical();
        let j = t.to_json();
        assert_eq!(&DecorationTable::from_json(&j).unwrap(), t);
        let mut bad = j.clone();
        bad.orientations[3].flag_dir[0] = (bad.orientations[3].flag_dir[0] + 1) % 12;
        assert!(DecorationTable::from_json(&bad).is_err());
    }
}

//! Tracing closed stripe curves.
//!
//! Each tile carries three stripe segments joining pairs of ports. Black
//! ports are edges and lead to the adjacent tile; purple ports are vertices
//! and lead to the next-nearest tile across that vertex. In a rule-clean
//! patch a stripe leaving port `p` enters the neighbour at port `p + 3`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::lattice::{HexCoord, Patch, PointGroupElement};
use crate::prototile::{DecorationTable, StripeKind};

fn step(kind: StripeKind, port: usize) -> HexCoord {
    match kind {
        StripeKind::Black => HexCoord::ORIGIN.neighbor(port),
        StripeKind::Purple => HexCoord::vertex_step(port),
    }
}

/// Maps a purple-sublattice offset to coordinates on the √3-scaled lattice
/// spanned by `vertex_step(0)` and `vertex_step(1)`.
pub fn sqrt3_coords(d: HexCoord) -> Option<HexCoord> {
    let (a, b) = (2 * d.q + d.r, d.r - d.q);
    if a % 3 != 0 || b % 3 != 0 {
        return None;
    }
    let (x, y) = (a / 3, b / 3);
    Some(HexCoord::new(x, y))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ring {
    /// `(tile, segment index)` in traversal order.
    pub segments: Vec<(HexCoord, u8)>,
    /// Lattice diameter of the ring's tiles, in units of the stripe
    /// system's own lattice (1 for black, √3 for purple).
    pub side_length: u32,
    /// `log2(side_length)` when the ring is a regular truncated triangle of
    /// `3 * side_length` segments.
    pub level: Option<u32>,
    pub centroid_sum: HexCoord,
}

impl Ring {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn tiles(&self) -> BTreeSet<HexCoord> {
        self.segments.iter().map(|s| s.0).collect()
    }

    /// Whether the centroid lies in the half-open parallelogram
    /// `[lo, hi) x [lo, hi)` of axial coordinates.
    pub fn centroid_in_window(&self, lo: i32, hi: i32) -> bool {
        let len = self.segments.len() as i64;
        let range = lo as i64 * len..hi as i64 * len;
        range.contains(&(self.centroid_sum.q as i64))
            && range.contains(&(self.centroid_sum.r as i64))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LevelCount {
    pub rings: usize,
    pub side_length: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingCensus {
    pub rings: Vec<Ring>,
    pub by_level: BTreeMap<u32, LevelCount>,
    /// Closed curves that are not regular truncated triangles.
    pub irregular: usize,
    /// Stripes that run off the patch.
    pub open: usize,
}

impl RingCensus {
    pub fn count(&self, level: u32) -> usize {
        self.by_level.get(&level).map_or(0, |c| c.rings)
    }

    /// Tile -> smallest level among closed rings through any of its
    /// segments.
    pub fn tile_levels(&self) -> BTreeMap<HexCoord, u32> {
        let mut out: BTreeMap<HexCoord, u32> = BTreeMap::new();
        for ring in &self.rings {
            if let Some(l) = ring.level {
                for (c, _) in &ring.segments {
                    out.entry(*c).and_modify(|x| *x = (*x).min(l)).or_insert(l);
                }
            }
        }
        out
    }
}

pub fn trace_rings(patch: &Patch, kind: StripeKind) -> RingCensus {
    trace_rings_with(DecorationTable::canonical(), patch, kind)
}

pub fn trace_rings_with(table: &DecorationTable, patch: &Patch, kind: StripeKind) -> RingCensus {
    let segs = |g: PointGroupElement| table.world_segments(kind, g);
    let mut seen: BTreeSet<(HexCoord, u8)> = BTreeSet::new();
    let mut rings = Vec::new();
    let mut open = 0;
    for t in patch.tiles() {
        for s in 0..3u8 {
            if seen.contains(&(t.at, s)) {
                continue;
            }
            let (path, closed) = follow(patch, kind, &segs, t.at, s);
            seen.extend(path.iter().copied());
            if closed {
                rings.push(make_ring(kind, path));
            } else {
                open += 1;
            }
        }
    }
    let mut by_level: BTreeMap<u32, LevelCount> = BTreeMap::new();
    let mut irregular = 0;
    for r in &rings {
        match r.level {
            Some(l) => {
                let e = by_level.entry(l).or_insert(LevelCount {
                    rings: 0,
                    side_length: r.side_length,
                });
                e.rings += 1;
            }
            None => irregular += 1,
        }
    }
    RingCensus {
        rings,
        by_level,
        irregular,
        open,
    }
}

/// Walks both ways from segment `s` of `start`. Returns the visited
/// segments and whether the curve closes.
fn follow(
    patch: &Patch,
    kind: StripeKind,
    segs: &impl Fn(PointGroupElement) -> [(usize, usize); 3],
    start: HexCoord,
    s: u8,
) -> (Vec<(HexCoord, u8)>, bool) {
    let g0 = patch.orient(start).expect("start tile present");
    let (p_back, p_fwd) = segs(g0)[s as usize];
    let mut path = vec![(start, s)];

    let walk = |mut cell: HexCoord, mut port: usize, path: &mut Vec<(HexCoord, u8)>| -> bool {
        loop {
            let next = cell + step(kind, port);
            let Some(g) = patch.orient(next) else {
                return false;
            };
            let entry = (port + 3) % 6;
            let Some((idx, &(a, b))) = segs(g)
                .iter()
                .enumerate()
                .find(|(_, &(a, b))| a == entry || b == entry)
            else {
                return false;
            };
            if (next, idx as u8) == (start, s) {
                return true;
            }
            path.push((next, idx as u8));
            port = if a == entry { b } else { a };
            cell = next;
            if path.len() > patch.len() * 3 {
                return false;
            }
        }
    };

    if walk(start, p_fwd, &mut path) {
        return (path, true);
    }
    let mut back = Vec::new();
    walk(start, p_back, &mut back);
    back.reverse();
    back.extend(path);
    (back, false)
}

fn make_ring(kind: StripeKind, segments: Vec<(HexCoord, u8)>) -> Ring {
    let tiles: Vec<HexCoord> = segments
        .iter()
        .map(|s| s.0)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let origin = tiles[0];
    let local: Vec<HexCoord> = tiles
        .iter()
        .map(|&c| match kind {
            StripeKind::Black => c - origin,
            StripeKind::Purple => {
                sqrt3_coords(c - origin).expect("purple ring stays on one sublattice")
            }
        })
        .collect();
    let mut diameter = 0;
    for (i, a) in local.iter().enumerate() {
        for b in &local[i + 1..] {
            diameter = diameter.max(a.distance(*b));
        }
    }
    let n = segments.len() as u32;
    let level =
        (diameter.is_power_of_two() && n == 3 * diameter).then(|| diameter.trailing_zeros());
    let centroid_sum = segments.iter().fold(HexCoord::ORIGIN, |acc, s| acc + s.0);
    Ring {
        segments,
        side_length: diameter,
        level,
        centroid_sum,
    }
}

/// Fraction of `cells` carrying a segment of a closed ring of `level`.
pub fn participation_fraction(census: &RingCensus, cells: &[HexCoord], level: u32) -> f64 {
    if cells.is_empty() {
        return 0.0;
    }
    let on: BTreeSet<HexCoord> = census
        .rings
        .iter()
        .filter(|r| r.level == Some(level))
        .flat_map(|r| r.segments.iter().map(|s| s.0))
        .collect();
    cells.iter().filter(|c| on.contains(c)).count() as f64 / cells.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt3_basis() {
        assert_eq!(
            sqrt3_coords(HexCoord::vertex_step(0)),
            Some(HexCoord::new(1, 0))
        );
        assert_eq!(
            sqrt3_coords(HexCoord::vertex_step(1)),
            Some(HexCoord::new(0, 1))
        );
        assert_eq!(sqrt3_coords(HexCoord::new(1, 0)), None);
    }

    #[test]
    fn empty_patch_has_no_rings() {
        let c = trace_rings(&Patch::new(), StripeKind::Black);
        assert!(c.rings.is_empty() && c.by_level.is_empty());
    }
}

//! Chirality parity, paperfolding rays, islands and the purple-ring view.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::lattice::{HexCoord, Patch};
use crate::prototile::StripeKind;
use crate::rings::{trace_rings, Ring, RingCensus};

/// Tile -> `true` for mirrored tiles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ParityField {
    pub bits: BTreeMap<HexCoord, bool>,
}

impl ParityField {
    pub fn get(&self, c: HexCoord) -> Option<bool> {
        self.bits.get(&c).copied()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn mirrored_count(&self) -> usize {
        self.bits.values().filter(|b| **b).count()
    }
}

pub fn parity_field(patch: &Patch) -> ParityField {
    ParityField {
        bits: patch
            .tiles()
            .map(|t| (t.at, t.orient.reflected()))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaySpec {
    pub origin: HexCoord,
    pub direction: usize,
    pub step: u32,
}

impl RaySpec {
    /// The ray along which the parity of `generate(C, k)` reproduces the
    /// paperfolding sequence.
    pub const CANONICAL: RaySpec = RaySpec {
        origin: HexCoord::new(-1, 1),
        direction: 2,
        step: 1,
    };

    pub fn position(&self, n: u32) -> HexCoord {
        self.origin
            + HexCoord::ORIGIN
                .neighbor(self.direction % 6)
                .scale((n * self.step) as i32)
    }
}

/// Parity bits along the ray, stopping at the first position off the
/// patch.
pub fn ray_sequence(patch: &Patch, ray: &RaySpec, n: usize) -> Vec<bool> {
    (0..n as u32)
        .map_while(|i| patch.orient(ray.position(i)).map(|g| g.reflected()))
        .collect()
}

/// Terms `1..=n` of the regular paperfolding sequence.
pub fn paperfolding(n: usize) -> Vec<bool> {
    (1..=n as u64)
        .map(|k| {
            let m = k >> k.trailing_zeros();
            m % 4 == 1
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

/// Rays from origins within `radius` of the patch origin, in every
/// direction, whose first `len` bits are the paperfolding sequence or its
/// complement. The flag in each hit is `true` for the complement.
pub fn find_paperfolding_rays(patch: &Patch, radius: u32, len: usize) -> Vec<(RaySpec, bool)> {
    let target = paperfolding(len);
    let mut hits = Vec::new();
    for origin in HexCoord::ORIGIN.spiral(radius) {
        for direction in 0..6 {
            let ray = RaySpec {
                origin,
                direction,
                step: 1,
            };
            let bits = ray_sequence(patch, &ray, len);
            if bits.len() < len {
                continue;
            }
            if bits == target {
                hits.push((ray, false));
            } else if bits.iter().zip(&target).all(|(a, b)| a != b) {
                hits.push((ray, true));
            }
        }
    }
    hits
}

/// A connected region of one chirality whose every outside neighbour is
/// present in the patch and of the other chirality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Island {
    pub tiles: Vec<HexCoord>,
    pub size: usize,
    pub mirrored: bool,
    /// Tiles in the holes of the island.
    pub enclosed: usize,
    /// `size + enclosed`.
    pub total: usize,
}

/// Islands of at most `max_size` tiles, sorted by size then position.
pub fn find_islands(patch: &Patch, max_size: usize) -> Vec<Island> {
    let mut seen: BTreeSet<HexCoord> = BTreeSet::new();
    let mut out = Vec::new();
    for t in patch.tiles() {
        if seen.contains(&t.at) {
            continue;
        }
        let chir = t.orient.reflected();
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([t.at]);
        seen.insert(t.at);
        let mut touches_edge = false;
        while let Some(c) = queue.pop_front() {
            comp.push(c);
            for nb in c.neighbors() {
                match patch.orient(nb) {
                    None => touches_edge = true,
                    Some(g) if g.reflected() == chir && !seen.contains(&nb) => {
                        seen.insert(nb);
                        queue.push_back(nb);
                    }
                    _ => {}
                }
            }
        }
        if touches_edge || comp.len() > max_size {
            continue;
        }
        comp.sort();
        let enclosed = hole_area(patch, &comp);
        out.push(Island {
            size: comp.len(),
            mirrored: chir,
            enclosed,
            total: comp.len() + enclosed,
            tiles: comp,
        });
    }
    out.sort_by(|a, b| (a.size, &a.tiles).cmp(&(b.size, &b.tiles)));
    out
}

/// Cells cut off from the far field by `island`.
fn hole_area(patch: &Patch, island: &[HexCoord]) -> usize {
    let set: BTreeSet<HexCoord> = island.iter().copied().collect();
    let anchor = island[0];
    // Hex balls are convex, so holes lie within the island's reach.
    let reach = island.iter().map(|c| c.distance(anchor)).max().unwrap_or(0);
    let mut hole = 0;
    let mut visited: BTreeSet<HexCoord> = BTreeSet::new();
    for c in island {
        for start in c.neighbors() {
            if set.contains(&start) || visited.contains(&start) {
                continue;
            }
            let mut region = 1;
            let mut queue = VecDeque::from([start]);
            visited.insert(start);
            let mut escapes = false;
            while let Some(x) = queue.pop_front() {
                if x.distance(anchor) > reach || !patch.contains(x) {
                    escapes = true;
                    continue;
                }
                for nb in x.neighbors() {
                    if !set.contains(&nb) && visited.insert(nb) {
                        region += 1;
                        queue.push_back(nb);
                    }
                }
            }
            if !escapes {
                hole += region;
            }
        }
    }
    hole
}

/// Size histogram of an island list.
pub fn island_histogram(islands: &[Island]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for i in islands {
        *h.entry(i.size).or_insert(0) += 1;
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelComparison {
    pub level: u32,
    pub black: usize,
    pub purple: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurpleView {
    pub census: RingCensus,
    /// Tiles per coset of the lattice spanned by the purple steps,
    /// indexed by `(q - r) mod 3`.
    pub sublattice_tiles: [usize; 3],
    /// Cosets carrying at least one closed purple ring.
    pub structures: usize,
}

fn coset(c: HexCoord) -> usize {
    (c.q - c.r).rem_euclid(3) as usize
}

pub fn purple_view(patch: &Patch) -> PurpleView {
    let census = trace_rings(patch, StripeKind::Purple);
    let mut sublattice_tiles = [0; 3];
    for c in patch.coords() {
        sublattice_tiles[coset(c)] += 1;
    }
    let carrying: BTreeSet<usize> = census
        .rings
        .iter()
        .map(|r| coset(r.segments[0].0))
        .collect();
    PurpleView {
        census,
        sublattice_tiles,
        structures: carrying.len(),
    }
}

/// Closed rings per level whose centroid lies in the axial window
/// `[-half, half)²`, for both stripe systems. Ring centroids of both systems
/// sit at the same density per level, so equal counts in a fixed window
/// are the observable form of the √3 similarity.
pub fn compare_censuses(patch: &Patch, half: i32, levels: u32) -> Vec<LevelComparison> {
    let black = trace_rings(patch, StripeKind::Black);
    let purple = trace_rings(patch, StripeKind::Purple);
    let count = |c: &RingCensus, l: u32| {
        c.rings
            .iter()
            .filter(|r| r.level == Some(l) && r.centroid_in_window(-half, half))
            .count()
    };
    (0..=levels)
        .map(|level| LevelComparison {
            level,
            black: count(&black, level),
            purple: count(&purple, level),
        })
        .collect()
}

/// Six times a ring's centroid, when that is a lattice point.
fn centroid6(r: &Ring) -> Option<HexCoord> {
    let n = r.len() as i32;
    let s = r.centroid_sum.scale(6);
    (s.q % n == 0 && s.r % n == 0).then(|| HexCoord::new(s.q / n, s.r / n))
}

/// Scaling by √3 with a quarter turn, on axial coordinates.
pub fn sqrt3_quarter_turn(x: HexCoord) -> HexCoord {
    HexCoord::new(-x.q - 2 * x.r, 2 * x.q + x.r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SimilarityLevel {
    pub level: u32,
    /// Black centroids whose image lands in the window.
    pub black: usize,
    /// Purple centroids of the structure inside the window.
    pub purple: usize,
    /// Images with no purple ring there, plus purple rings with no black
    /// preimage.
    pub unmatched: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureSimilarity {
    /// Coset `(q - r) mod 3` of the structure's tiles.
    pub structure: usize,
    /// Translation, in sixths of a lattice unit, taking scaled black
    /// centroids onto this structure's purple centroids.
    pub offset: Option<HexCoord>,
    pub levels: Vec<SimilarityLevel>,
}

impl StructureSimilarity {
    pub fn exact(&self) -> bool {
        self.offset.is_some() && self.levels.iter().all(|l| l.unmatched == 0 && l.purple > 0)
    }
}

/// Maps level-`l` black ring centroids by `x -> S x + t`, with `S` the √3
/// quarter-turn similarity and one translation `t` per purple structure
/// shared by all levels, and compares with that structure's purple ring
/// centroids inside the disk of the given radius about the origin.
pub fn purple_similarity(patch: &Patch, radius: u32, levels: u32) -> Vec<StructureSimilarity> {
    let black = trace_rings(patch, StripeKind::Black);
    let purple = trace_rings(patch, StripeKind::Purple);
    let inside = |x: HexCoord| x.length() <= 6 * radius;
    let points = |c: &RingCensus, l: u32, coset_of: Option<usize>| -> BTreeSet<HexCoord> {
        c.rings
            .iter()
            .filter(|r| r.level == Some(l) && coset_of.is_none_or(|k| coset(r.segments[0].0) == k))
            .filter_map(centroid6)
            .collect()
    };
    let compare = |l: u32, s: usize, t: HexCoord| {
        let img: BTreeSet<HexCoord> = points(&black, l, None)
            .into_iter()
            .map(|b| sqrt3_quarter_turn(b) + t)
            .filter(|x| inside(*x))
            .collect();
        let pur: BTreeSet<HexCoord> = points(&purple, l, Some(s))
            .into_iter()
            .filter(|x| inside(*x))
            .collect();
        SimilarityLevel {
            level: l,
            black: img.len(),
            purple: pur.len(),
            unmatched: img.symmetric_difference(&pur).count(),
        }
    };
    (0..3)
        .map(|s| {
            // Low levels repeat with short periods, so candidate offsets
            // come from the sparsest level: the black centroid nearest the
            // origin sent onto each purple centroid of the window. Ties
            // break towards small offsets.
            let top = levels;
            let b0 = points(&black, top, None)
                .into_iter()
                .min_by_key(|b| (b.length(), *b));
            let near: Vec<HexCoord> = points(&purple, top, Some(s))
                .into_iter()
                .filter(|p| inside(*p))
                .collect();
            let score = |t: HexCoord| {
                (0..=levels)
                    .map(|l| compare(l, s, t).unmatched)
                    .sum::<usize>()
            };
            let offset = b0.and_then(|b| {
                near.iter()
                    .map(|p| *p - sqrt3_quarter_turn(b))
                    .min_by_key(|t| (score(*t), t.length(), *t))
            });
            let levels = match offset {
                Some(t) => (0..=levels).map(|l| compare(l, s, t)).collect(),
                None => Vec::new(),
            };
            StructureSimilarity {
                structure: s,
                offset,
                levels,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paperfolding_prefix() {
        let want = [true, true, false, true, true, false, false, true];
        assert_eq!(paperfolding(8), want);
        assert!(paperfolding(0).is_empty());
    }

    #[test]
    fn ray_positions() {
        let ray = RaySpec {
            origin: HexCoord::new(1, 1),
            direction: 0,
            step: 2,
        };
        assert_eq!(ray.position(0), HexCoord::new(1, 1));
        assert_eq!(ray.position(3), HexCoord::new(7, 1));
    }
}

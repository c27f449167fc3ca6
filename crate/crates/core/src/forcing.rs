//! Exhaustive corona enumeration and forced-placement propagation.
//!
//! Both work on a finite region of cells with orientation domains stored as
//! 12-bit masks. Pairwise constraints are the R1 and R2 relations between
//! cells of the region.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::lattice::{HexCoord, Patch, PointGroupElement, TileInstance};
use crate::prototile::{r1_allows, r2_allows, DecorationTable, Rule, StripeKind};
use crate::rings::trace_rings;

pub type Domain = u16;
pub const FULL: Domain = (1 << 12) - 1;

fn bit(g: PointGroupElement) -> Domain {
    1 << g.index()
}

fn members(d: Domain) -> impl Iterator<Item = PointGroupElement> {
    (0..12)
        .filter(move |i| d & (1 << i) != 0)
        .map(PointGroupElement::from_index)
}

/// `[relation][orientation of x]` -> mask of orientations allowed at the
/// partner. Relations 0..6 are R1 across edge k, 6..12 are R2 toward
/// `vertex_step(m)`.
struct Tables {
    allow: [[Domain; 12]; 12],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let d = DecorationTable::canonical();
        let mut allow = [[0; 12]; 12];
        for k in 0..6 {
            for a in PointGroupElement::all() {
                for b in PointGroupElement::all() {
                    if r1_allows(d, a, b, k) {
                        allow[k][a.index()] |= bit(b);
                    }
                    if r2_allows(d, a, b, k) {
                        allow[6 + k][a.index()] |= bit(b);
                    }
                }
            }
        }
        Tables { allow }
    })
}

/// Number of allowed `(x, y)` orientation pairs for each relation.
pub fn relation_sizes() -> [u32; 12] {
    let t = tables();
    std::array::from_fn(|rel| t.allow[rel].iter().map(|m| m.count_ones()).sum())
}

/// The rule linking `x` to `y`, with the edge or vertex index at `x`.
fn relations_between(x: HexCoord, y: HexCoord) -> Option<(Rule, usize)> {
    let d = y - x;
    if let Some(k) = HexCoord::ORIGIN.direction_to(d) {
        return Some((Rule::R1, k));
    }
    (0..6)
        .find(|&m| HexCoord::vertex_step(m) == d)
        .map(|m| (Rule::R2, m))
}

/// Offsets of every partner of a cell, with the relation index toward it.
const PARTNERS: [(HexCoord, usize); 12] = {
    let mut out = [(HexCoord::ORIGIN, 0); 12];
    let dirs = crate::lattice::DIRECTIONS;
    let mut k = 0;
    while k < 6 {
        out[k] = (dirs[k], k);
        let a = dirs[k];
        let b = dirs[(k + 1) % 6];
        out[6 + k] = (HexCoord::new(a.q + b.q, a.r + b.r), 6 + k);
        k += 1;
    }
    out
};

/// Region cells and their constraint graph.
#[derive(Clone, Debug)]
struct Network {
    cells: Vec<HexCoord>,
    /// `(partner, relation from this cell to the partner)`.
    arcs: Vec<Vec<(usize, usize)>>,
}

impl Network {
    fn new(cells: Vec<HexCoord>) -> Network {
        let index: HashMap<HexCoord, usize> =
            cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let arcs = cells
            .iter()
            .map(|c| {
                PARTNERS
                    .iter()
                    .filter_map(|&(d, rel)| index.get(&(*c + d)).map(|&j| (j, rel)))
                    .collect()
            })
            .collect();
        Network { cells, arcs }
    }

    /// Enforces arc consistency in place; `false` on a wiped-out domain.
    fn arc_consistency(
        &self,
        dom: &mut [Domain],
        queue: &mut VecDeque<usize>,
        queued: &mut [bool],
    ) -> bool {
        let t = tables();
        while let Some(i) = queue.pop_front() {
            queued[i] = false;
            let di = dom[i];
            for &(j, rel) in &self.arcs[i] {
                let mut support = 0;
                for a in 0..12 {
                    if di & (1 << a) != 0 {
                        support |= t.allow[rel][a];
                    }
                }
                let nj = dom[j] & support;
                if nj != dom[j] {
                    if nj == 0 {
                        return false;
                    }
                    dom[j] = nj;
                    if !queued[j] {
                        queued[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        true
    }

    fn ac_from(&self, dom: &mut [Domain], start: impl IntoIterator<Item = usize>) -> bool {
        let mut queued = vec![false; dom.len()];
        let mut queue = VecDeque::new();
        for i in start {
            if !queued[i] {
                queued[i] = true;
                queue.push_back(i);
            }
        }
        self.arc_consistency(dom, &mut queue, &mut queued)
    }

    /// Domains filtered directly by the placed (singleton) partners only.
    fn direct_filter(&self, dom: &[Domain], i: usize) -> Domain {
        let t = tables();
        let mut d = dom[i];
        for &(j, rel) in &self.arcs[i] {
            if dom[j].count_ones() == 1 {
                // Relation from j back to i is the opposite one.
                let back = if rel < 6 {
                    (rel + 3) % 6
                } else {
                    6 + (rel - 6 + 3) % 6
                };
                d &= t.allow[back][dom[j].trailing_zeros() as usize];
            }
        }
        d
    }
}

/// A patch being extended, with the empty cells next to it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialConfig {
    pub patch: Patch,
}

impl PartialConfig {
    pub fn new(patch: Patch) -> Self {
        PartialConfig { patch }
    }

    pub fn frontier(&self) -> Vec<HexCoord> {
        self.patch.frontier()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Inference {
    /// An orientation survives if it agrees with every placed tile.
    Direct,
    /// Arc consistency over the whole region.
    Arc,
    /// Arc consistency after tentatively fixing each candidate
    /// (singleton arc consistency).
    Singleton,
}

/// Which cells propagation may consider and which it must fill.
#[derive(Clone, Debug)]
pub struct Region {
    pub cells: Vec<HexCoord>,
}

impl Region {
    pub fn disk(center: HexCoord, radius: u32) -> Region {
        Region {
            cells: center.spiral(radius),
        }
    }

    /// Cells within `radius` of the vertex whose three cells are
    /// `c, c + d_j, c + d_{j+1}`, measured from the nearest of them.
    pub fn around_vertex(c: HexCoord, j: usize, radius: u32) -> Region {
        let tri = vertex_cells(c, j);
        let mut set = BTreeSet::new();
        for t in tri {
            set.extend(t.spiral(radius));
        }
        let mut cells: Vec<HexCoord> = set.into_iter().collect();
        cells.sort_by_key(|x| (tri.iter().map(|t| t.distance(*x)).min().unwrap(), *x));
        Region { cells }
    }
}

/// The three cells that meet at vertex `j` of `c`.
pub fn vertex_cells(c: HexCoord, j: usize) -> [HexCoord; 3] {
    [c, c.neighbor(j), c.neighbor(j + 1)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ForceReason {
    /// Every other orientation clashes with one of these placed tiles.
    Neighbours(Vec<(Rule, HexCoord)>),
    /// Forced by arc consistency over the region.
    Arc,
    /// Every other orientation leads to a wipe-out under arc consistency.
    Probe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcedPlacement {
    pub tile: TileInstance,
    pub reason: ForceReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    /// A cell left with no consistent orientation.
    pub cell: HexCoord,
}

#[derive(Clone, Debug)]
pub struct Propagation {
    pub config: PartialConfig,
    pub trace: Vec<ForcedPlacement>,
    /// Region cells still open, with their remaining candidates.
    pub open: BTreeMap<HexCoord, Vec<PointGroupElement>>,
}

impl Propagation {
    /// Largest `r` such that every region cell within `r` of `center`
    /// is filled.
    pub fn filled_radius(&self, center: &[HexCoord]) -> u32 {
        let nearest = |x: HexCoord| center.iter().map(|c| c.distance(x)).min().unwrap_or(0);
        match self.open.keys().map(|&x| nearest(x)).min() {
            Some(d) => d.saturating_sub(1),
            None => u32::MAX,
        }
    }
}

/// Fills forced cells of `region` until nothing changes. Cells of the
/// configuration outside the region still constrain their partners.
pub fn propagate(
    config: &PartialConfig,
    region: &Region,
    inference: Inference,
) -> Result<Propagation, Contradiction> {
    let mut cells: Vec<HexCoord> = config.patch.coords().collect();
    let placed: BTreeSet<HexCoord> = cells.iter().copied().collect();
    cells.extend(region.cells.iter().filter(|c| !placed.contains(c)));
    let net = Network::new(cells);
    let mut dom: Vec<Domain> = net
        .cells
        .iter()
        .map(|c| config.patch.orient(*c).map_or(FULL, bit))
        .collect();

    let mut trace = Vec::new();
    let record = |dom: &[Domain],
                  before: &[Domain],
                  reason: &dyn Fn(usize) -> ForceReason,
                  trace: &mut Vec<ForcedPlacement>| {
        for i in 0..dom.len() {
            if before[i].count_ones() > 1 && dom[i].count_ones() == 1 {
                let g = PointGroupElement::from_index(dom[i].trailing_zeros() as usize);
                trace.push(ForcedPlacement {
                    tile: TileInstance::new(net.cells[i], g),
                    reason: reason(i),
                });
            }
        }
    };
    let wipe = |dom: &[Domain]| Contradiction {
        cell: net.cells[dom.iter().position(|&d| d == 0).unwrap_or(0)],
    };

    match inference {
        Inference::Direct => loop {
            let before = dom.clone();
            let mut changed = false;
            for i in 0..dom.len() {
                if dom[i].count_ones() == 1 {
                    continue;
                }
                let d = net.direct_filter(&dom, i);
                if d == 0 {
                    return Err(Contradiction { cell: net.cells[i] });
                }
                if d.count_ones() == 1 {
                    dom[i] = d;
                    changed = true;
                }
            }
            let reason = |i: usize| {
                let c = net.cells[i];
                ForceReason::Neighbours(
                    net.arcs[i]
                        .iter()
                        .filter(|&&(j, _)| before[j].count_ones() == 1)
                        .filter_map(|&(j, _)| {
                            relations_between(c, net.cells[j]).map(|(r, _)| (r, net.cells[j]))
                        })
                        .collect(),
                )
            };
            record(&dom, &before, &reason, &mut trace);
            if !changed {
                break;
            }
        },
        Inference::Arc => {
            let before = dom.clone();
            if !net.ac_from(&mut dom, 0..net.cells.len()) {
                return Err(wipe(&dom));
            }
            record(&dom, &before, &|_| ForceReason::Arc, &mut trace);
        }
        Inference::Singleton => {
            let before = dom.clone();
            if !net.ac_from(&mut dom, 0..net.cells.len()) {
                return Err(wipe(&dom));
            }
            record(&dom, &before, &|_| ForceReason::Arc, &mut trace);
            loop {
                let before = dom.clone();
                if !singleton_pass(&net, &mut dom) {
                    return Err(wipe(&dom));
                }
                record(&dom, &before, &|_| ForceReason::Probe, &mut trace);
                if dom == before {
                    break;
                }
            }
        }
    }

    let mut config = config.clone();
    let mut open = BTreeMap::new();
    for (i, &c) in net.cells.iter().enumerate() {
        if dom[i].count_ones() == 1 {
            if !config.patch.contains(c) {
                config.patch.set(TileInstance::new(
                    c,
                    PointGroupElement::from_index(dom[i].trailing_zeros() as usize),
                ));
            }
        } else if region.cells.contains(&c) {
            open.insert(c, members(dom[i]).collect());
        }
    }
    Ok(Propagation {
        config,
        trace,
        open,
    })
}

/// One sweep of singleton probes; probes of a cell run in parallel.
fn singleton_pass(net: &Network, dom: &mut [Domain]) -> bool {
    for i in 0..net.cells.len() {
        if dom[i].count_ones() <= 1 {
            continue;
        }
        let snapshot = dom.to_vec();
        let keep: Domain = members(snapshot[i])
            .collect::<Vec<_>>()
            .par_iter()
            .filter(|g| {
                let mut trial = snapshot.clone();
                trial[i] = bit(**g);
                net.ac_from(&mut trial, [i])
            })
            .map(|g| bit(*g))
            .reduce(|| 0, |a, b| a | b);
        if keep != dom[i] {
            dom[i] = keep;
            if keep == 0 || !net.ac_from(dom, [i]) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Partial assignments expanded (the root counts as one).
    pub nodes: u64,
    /// Complete consistent assignments reached.
    pub leaves: u64,
    /// Orientation choices rejected on a decidable violation.
    pub pruned: u64,
    /// Complete assignments below the rejected choices.
    pub pruned_leaves: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoronaEnumeration {
    pub center: PointGroupElement,
    pub radius: u32,
    /// Cells in search order; the first is the centre.
    pub cells: Vec<HexCoord>,
    /// One orientation index per cell, same order as `cells`.
    pub solutions: Vec<Vec<u8>>,
    pub stats: SearchStats,
}

impl CoronaEnumeration {
    pub fn solution_patch(&self, i: usize) -> Patch {
        let mut p = Patch::new();
        for (c, &g) in self.cells.iter().zip(&self.solutions[i]) {
            p.set(TileInstance::new(
                *c,
                PointGroupElement::from_index(g as usize),
            ));
        }
        p
    }

    /// `12^(cells - 1)`: every assignment of the non-centre cells.
    pub fn search_space(&self) -> u128 {
        12u128.pow(self.cells.len() as u32 - 1)
    }
}

/// Depth-first enumeration of every rule-consistent filling of the disk
/// of `radius` around a centre of fixed orientation, in spiral order.
pub fn enumerate_coronas(center: PointGroupElement, radius: u32) -> CoronaEnumeration {
    let cells = HexCoord::ORIGIN.spiral(radius);
    let index: HashMap<HexCoord, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    // For each cell, constraints from earlier cells: (earlier idx, relation
    // from the earlier cell toward this one).
    let back: Vec<Vec<(usize, usize)>> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            PARTNERS
                .iter()
                .filter_map(|&(d, rel)| {
                    let j = *index.get(&(*c - d))?;
                    (j < i).then_some((j, rel))
                })
                .collect()
        })
        .collect();

    let n = cells.len();
    let mut assign = vec![0u8; n];
    assign[0] = center.index() as u8;
    let first_domain = allowed(&back[1], &assign);

    // Parallel over the first non-centre cell's 12 orientations, merged in
    // orientation order.
    let branches: Vec<(Vec<Vec<u8>>, SearchStats)> = (0..12u8)
        .into_par_iter()
        .map(|g| {
            let mut stats = SearchStats::default();
            let mut sols = Vec::new();
            if first_domain & (1 << g) == 0 {
                stats.pruned += 1;
                stats.pruned_leaves += 12u128.pow((n - 2) as u32);
                return (sols, stats);
            }
            let mut a = assign.clone();
            a[1] = g;
            dfs(&back, &mut a, 2, &mut sols, &mut stats);
            (sols, stats)
        })
        .collect();

    let mut stats = SearchStats {
        nodes: 1,
        ..Default::default()
    };
    let mut solutions = Vec::new();
    for (sols, s) in branches {
        solutions.extend(sols);
        stats.nodes += s.nodes;
        stats.leaves += s.leaves;
        stats.pruned += s.pruned;
        stats.pruned_leaves += s.pruned_leaves;
    }
    CoronaEnumeration {
        center,
        radius,
        cells,
        solutions,
        stats,
    }
}

fn allowed(back: &[(usize, usize)], assign: &[u8]) -> Domain {
    let t = tables();
    back.iter()
        .fold(FULL, |m, &(j, rel)| m & t.allow[rel][assign[j] as usize])
}

fn dfs(
    back: &[Vec<(usize, usize)>],
    assign: &mut Vec<u8>,
    depth: usize,
    sols: &mut Vec<Vec<u8>>,
    stats: &mut SearchStats,
) {
    stats.nodes += 1;
    let n = assign.len();
    if depth == n {
        stats.leaves += 1;
        sols.push(assign.clone());
        return;
    }
    let dom = allowed(&back[depth], assign);
    let below = 12u128.pow((n - depth - 1) as u32);
    let rejected = 12 - dom.count_ones();
    stats.pruned += rejected as u64;
    stats.pruned_leaves += rejected as u128 * below;
    for g in 0..12u8 {
        if dom & (1 << g) != 0 {
            assign[depth] = g;
            dfs(back, assign, depth + 1, sols, stats);
        }
    }
}

/// Where a tile sits relative to the honeycomb of smallest black rings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    /// Carries a segment of a three-tile ring.
    Ring,
    /// Carries no smallest-ring segment.
    Hub,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoleSplit {
    pub ring_centers: usize,
    pub hub_centers: usize,
    /// Completions whose centre and first corona contradict the honeycomb.
    pub inconsistent: usize,
}

/// Role of the centre and its six neighbours in a completion of radius at
/// least 2, and whether they fit the honeycomb: a hub is surrounded by ring
/// tiles, a ring tile has exactly two hubs as neighbours, on opposite
/// sides.
pub fn honeycomb_roles(completion: &Patch) -> (Role, bool) {
    let census = trace_rings(completion, StripeKind::Black);
    let on: BTreeSet<HexCoord> = census
        .rings
        .iter()
        .filter(|r| r.level == Some(0))
        .flat_map(|r| r.segments.iter().map(|s| s.0))
        .collect();
    let role = |c: HexCoord| {
        if on.contains(&c) {
            Role::Ring
        } else {
            Role::Hub
        }
    };
    let center = role(HexCoord::ORIGIN);
    let around: Vec<Role> = HexCoord::ORIGIN
        .neighbors()
        .iter()
        .map(|&c| role(c))
        .collect();
    let ok = match center {
        Role::Hub => around.iter().all(|&r| r == Role::Ring),
        Role::Ring => {
            let hubs: Vec<usize> = (0..6).filter(|&k| around[k] == Role::Hub).collect();
            hubs.len() == 2 && hubs[1] - hubs[0] == 3
        }
    };
    (center, ok)
}

pub fn role_split(e: &CoronaEnumeration) -> RoleSplit {
    let results: Vec<(Role, bool)> = (0..e.solutions.len())
        .into_par_iter()
        .map(|i| honeycomb_roles(&e.solution_patch(i)))
        .collect();
    let mut s = RoleSplit::default();
    for (role, ok) in results {
        match role {
            Role::Ring => s.ring_centers += 1,
            Role::Hub => s.hub_centers += 1,
        }
        if !ok {
            s.inconsistent += 1;
        }
    }
    s
}

/// A consistent placement of three tiles around one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedCandidate {
    pub tiles: [TileInstance; 3],
    /// Invariant under the 120° rotation about the shared vertex.
    pub three_fold: bool,
    /// `None` when propagation found a contradiction.
    pub forced_radius: Option<u32>,
    pub placed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedSearch {
    pub search_radius: u32,
    /// Radius of the working region beyond which nothing is considered.
    pub region_radius: u32,
    /// One representative per symmetry class evaluated, three-fold ones
    /// first.
    pub candidates: Vec<SeedCandidate>,
    /// Classes left unevaluated.
    pub skipped: usize,
    /// Index into `candidates` of the returned seed.
    pub found: Option<usize>,
}

impl SeedSearch {
    pub fn seed(&self) -> Option<&SeedCandidate> {
        self.found.map(|i| &self.candidates[i])
    }
}

/// The symmetries of the lattice fixing vertex 0 of the origin cell: the
/// rotations by 120° about it and the three reflections through it.
pub fn vertex_stabilizer() -> Vec<crate::lattice::Motion> {
    use crate::lattice::Motion;
    let rot = Motion::new(PointGroupElement::new(2, false), HexCoord::new(1, 0));
    let refl = Motion::new(PointGroupElement::MIRROR, HexCoord::new(1, 0));
    let mut group = vec![Motion::IDENTITY];
    let mut i = 0;
    while i < group.len() {
        for gen in [rot, refl] {
            let m = gen.compose(group[i]);
            if !group.contains(&m) {
                group.push(m);
            }
        }
        i += 1;
    }
    group.sort();
    group
}

fn canonical_triple(
    tiles: &[TileInstance; 3],
    group: &[crate::lattice::Motion],
) -> [TileInstance; 3] {
    group
        .iter()
        .map(|m| {
            let mut t = tiles.map(|x| m.apply_tile(x));
            t.sort();
            t
        })
        .min()
        .expect("group is nonempty")
}

/// Tries every consistent three-tile vertex configuration (one per
/// symmetry class) and propagates it with singleton arc consistency over
/// the cells within `search_radius + margin` of the vertex. Returns the
/// first class, three-fold symmetric ones first, that fills the
/// `search_radius` disk. Unless `exhaustive`, the remaining classes are
/// skipped once a symmetric one succeeds.
pub fn find_unique_extension_seed(search_radius: u32, margin: u32, exhaustive: bool) -> SeedSearch {
    let tri = vertex_cells(HexCoord::ORIGIN, 0);
    let group = vertex_stabilizer();
    let t = tables();
    let mut classes: BTreeSet<[TileInstance; 3]> = BTreeSet::new();
    for a in PointGroupElement::all() {
        for b in members(t.allow[0][a.index()]) {
            for c in members(t.allow[1][a.index()] & t.allow[2][b.index()]) {
                let tiles = [
                    TileInstance::new(tri[0], a),
                    TileInstance::new(tri[1], b),
                    TileInstance::new(tri[2], c),
                ];
                classes.insert(canonical_triple(&tiles, &group));
            }
        }
    }

    let region_radius = search_radius + margin;
    let region = Region::around_vertex(HexCoord::ORIGIN, 0, region_radius);
    let rot = *group
        .iter()
        .find(|m| m.point == PointGroupElement::new(2, false))
        .unwrap();
    let (symmetric, rest): (Vec<_>, Vec<_>) = classes.into_iter().partition(|tiles| {
        let mut image = tiles.map(|x| rot.apply_tile(x));
        image.sort();
        image == *tiles
    });
    let evaluate = |list: &[[TileInstance; 3]], three_fold: bool| -> Vec<SeedCandidate> {
        list.par_iter()
            .map(|tiles| {
                let config = PartialConfig::new(Patch::from_tiles(tiles.iter().copied()).unwrap());
                let (forced_radius, placed) =
                    match propagate(&config, &region, Inference::Singleton) {
                        Ok(p) => (
                            Some(p.filled_radius(&tri).min(region_radius)),
                            p.config.patch.len(),
                        ),
                        Err(_) => (None, 0),
                    };
                SeedCandidate {
                    tiles: *tiles,
                    three_fold,
                    forced_radius,
                    placed,
                }
            })
            .collect()
    };
    let fills = |c: &SeedCandidate| c.forced_radius.is_some_and(|r| r >= search_radius);
    let mut candidates = evaluate(&symmetric, true);
    let skipped = if exhaustive || !candidates.iter().any(fills) {
        candidates.extend(evaluate(&rest, false));
        0
    } else {
        rest.len()
    };
    let found = candidates.iter().position(fills);
    SeedSearch {
        search_radius,
        region_radius,
        candidates,
        skipped,
        found,
    }
}

//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use monotile::analysis::*;
use monotile::forcing::*;
use monotile::io::*;
use monotile::render::*;
use monotile::rings::{participation_fraction, trace_rings};
use monotile::symmetry::*;
use monotile::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: Duration) -> Result<(), String> {
    ensure(t < limit, format!("took {t:.2?}, limit {limit:.0?}"))
}

fn rule_consistency() -> Check {
    let t0 = Instant::now();
    let patch = generate(Label::C, 6).to_patch();
    let report = validate_patch(&patch);
    let t = t0.elapsed();
    ensure(patch.len() >= 3000, format!("{} tiles", patch.len()))?;
    ensure(report.is_empty(), format!("{} violations", report.len()))?;
    within(t, Duration::from_secs(10))?;
    Ok(format!("{} tiles, 0 violations, {t:.2?}", patch.len()))
}

fn honeycomb_fraction() -> Check {
    let patch = generate(Label::C, 6).to_patch();
    let census = trace_rings(&patch, StripeKind::Black);
    let interior = patch.interior(4);
    let f = participation_fraction(&census, &interior, 0);
    ensure((f - 0.75).abs() <= 0.02, format!("fraction {f:.4}"))?;
    ensure(
        census.irregular == 0,
        format!("{} irregular rings", census.irregular),
    )?;
    let sides: BTreeSet<u32> = census.rings.iter().map(|r| r.side_length).collect();
    ensure(
        sides.iter().all(|s| s.is_power_of_two()),
        format!("sides {sides:?}"),
    )?;
    ensure(
        [1, 2, 4, 8].iter().all(|s| sides.contains(s)),
        format!("sides {sides:?}"),
    )?;
    Ok(format!(
        "fraction {f:.4} over {} tiles, sides {sides:?}",
        interior.len()
    ))
}

fn corona_enumeration() -> Check {
    // Frozen regression counts.
    const RADIUS_ONE: usize = 100;
    const RADIUS_TWO: usize = 484;
    let t0 = Instant::now();
    for g in PointGroupElement::all() {
        let e = enumerate_coronas(g, 1);
        ensure(
            e.solutions.len() == RADIUS_ONE,
            format!("radius 1 centre {g}: {}", e.solutions.len()),
        )?;
        ensure(
            e.stats.leaves as u128 + e.stats.pruned_leaves == e.search_space(),
            format!("centre {g} not exhaustive"),
        )?;
    }
    let mut split = (0, 0);
    for g in PointGroupElement::all() {
        let e = enumerate_coronas(g, 2);
        ensure(
            e.solutions.len() == RADIUS_TWO,
            format!("radius 2 centre {g}: {}", e.solutions.len()),
        )?;
        let s = role_split(&e);
        ensure(
            s.inconsistent == 0,
            format!(
                "centre {g}: {} completions off the honeycomb",
                s.inconsistent
            ),
        )?;
        split = (s.ring_centers, s.hub_centers);
    }
    let t = t0.elapsed();
    within(t, Duration::from_secs(60))?;
    Ok(format!(
        "{RADIUS_ONE} and {RADIUS_TWO} for all 12 centres, roles {}:{} ring:hub, {t:.2?}",
        split.0, split.1
    ))
}

fn unique_extension() -> Check {
    let t0 = Instant::now();
    let search = find_unique_extension_seed(8, 16, false);
    let t = t0.elapsed();
    let seed = search.seed().ok_or("no seed fills the disk")?;
    ensure(seed.three_fold, "seed is not three-fold")?;
    // Replay: propagation only places forced tiles, so a filled disk has no
    // branch points.
    let cells: BTreeSet<HexCoord> = seed.tiles.iter().map(|t| t.at).collect();
    let (c, j) = HexCoord::ORIGIN
        .spiral(2)
        .into_iter()
        .flat_map(|c| (0..6).map(move |j| (c, j)))
        .find(|&(c, j)| vertex_cells(c, j).iter().copied().collect::<BTreeSet<_>>() == cells)
        .ok_or("seed tiles do not share a vertex")?;
    let config = PartialConfig::new(Patch::from_tiles(seed.tiles).map_err(|e| e.to_string())?);
    let prop = propagate(
        &config,
        &Region::around_vertex(c, j, search.region_radius),
        Inference::Singleton,
    )
    .map_err(|e| format!("replay contradiction: {e:?}"))?;
    let r = prop.filled_radius(&vertex_cells(c, j));
    ensure(r >= 8, format!("filled radius {r}"))?;
    ensure(
        validate_patch(&prop.config.patch).is_empty(),
        "forced patch breaks a rule",
    )?;
    within(t, Duration::from_secs(120))?;
    Ok(format!(
        "three-fold seed fills radius {r}, {} tiles forced, {t:.2?}",
        prop.config.patch.len()
    ))
}

/// Paperfolding by repeated folding: append 1 then the reversed complement.
fn folded(n: usize) -> Vec<bool> {
    let mut s = vec![true];
    while s.len() < n {
        let back: Vec<bool> = s.iter().rev().map(|b| !b).collect();
        s.push(true);
        s.extend(back);
    }
    s.truncate(n);
    s
}

fn paperfolding_ray() -> Check {
    let patch = generate(Label::C, 8).to_patch();
    let bits = ray_sequence(&patch, &RaySpec::CANONICAL, 64);
    ensure(
        bits.len() == 64,
        format!("ray leaves the patch after {}", bits.len()),
    )?;
    let want = folded(64);
    let diff = bits.iter().zip(&want).position(|(a, b)| a != b);
    ensure(
        diff.is_none(),
        format!("first mismatch at bit {}", diff.unwrap_or(0)),
    )?;
    Ok(format!("64 bits {}", bits_to_string(&bits)))
}

fn islands() -> Check {
    let seven = find_islands(&generate(Label::C, 7).to_patch(), 10_000);
    let sizes = island_histogram(&seven);
    ensure(
        sizes.contains_key(&13) && sizes.contains_key(&63),
        format!("level 7 sizes {sizes:?}"),
    )?;
    let eight = find_islands(&generate(Label::C, 8).to_patch(), 10_000);
    let big = eight
        .iter()
        .find(|i| i.size == 242 && i.total == 255)
        .ok_or("no 242-tile island enclosing 13 at level 8")?;
    Ok(format!(
        "level 7 sizes {sizes:?}; level 8 island {} + {} = {}",
        big.size, big.enclosed, big.total
    ))
}

fn ruler() -> Check {
    let w = 1000i64;
    let m = RulerModel::new(w);
    let rec = classify(&m, 1, &[4, 8, 16], &SampleSpec::All);
    let mut parts = Vec::new();
    for r in &rec.radii {
        // Multiples of r/2 in [-w, w]; the blank at 0 counts as one.
        let closed = 2 * (w / (r.r / 2)) as usize + 1;
        ensure(
            r.below_n == closed,
            format!(
                "r={}: {} tiles at bound 0, closed form {closed}",
                r.r, r.below_n
            ),
        )?;
        ensure(
            r.sample_size == (2 * w + 1) as usize,
            "window not fully sampled",
        )?;
        parts.push(format!("r={} {}/{}", r.r, r.below_n, r.sample_size));
    }
    ensure(
        rec.verdict == Verdict::NonperiodicEvidence,
        format!("verdict {rec}"),
    )?;
    let fixed = matched_set(&m, &RulerModel::translation(8));
    let want: BTreeSet<i64> = (-w..=w)
        .filter(|&p| ruler_value(p).is_some_and(|v| v <= 4))
        .collect();
    let got: BTreeSet<i64> = fixed.tiles.iter().copied().collect();
    ensure(
        got == want,
        "translation by 8 does not fix exactly the values up to 4",
    )?;
    Ok(format!(
        "{}; {rec}; T(8) fixes values <= 4",
        parts.join(", ")
    ))
}

fn scd() -> Check {
    let m = ScdModel::new(Twist::Irrational, 12, 6);
    let rec = classify(&m, 3, &[4, 8, 16], &SampleSpec::All);
    ensure(
        rec.radii.iter().any(|r| r.below_n == 0),
        "some tile has fewer than 3 witnesses at every radius",
    )?;
    ensure(
        rec.to_string() == "fails nonperiodicity: heterogeneously periodic",
        format!("irrational: {rec}"),
    )?;
    let third = ScdModel::new(Twist::rational(1, 3).map_err(|e| e.to_string())?, 12, 6);
    let rec3 = classify(&third, 3, &[4, 8, 16], &SampleSpec::All);
    ensure(
        rec3.periodicity == Periodicity::Periodic,
        format!("pi/3: {rec3}"),
    )?;
    Ok(format!("irrational: {rec}; pi/3: {rec3}"))
}

fn smallest_symmetry() -> Check {
    let patch = generate(Label::C, 6).to_patch();
    let s = smallest_spacing_symmetry(&patch, 20, 4).ok_or("no translation symmetry found")?;
    ensure(s.motif_size == 24, format!("motif {}", s.motif_size))?;
    ensure(
        s.orientation_census == [2; 12],
        format!("census {:?}", s.orientation_census),
    )?;
    ensure(
        s.lattice_complete,
        "matched tiles do not fill the triangular lattice",
    )?;
    Ok(format!(
        "displacement {} motif 24 = 2 x 12 orientations, clusters {:?}",
        s.displacement, s.clusters
    ))
}

fn purple_black() -> Check {
    let patch = generate(Label::C, 6).to_patch();
    for s in purple_similarity(&patch, 24, 3) {
        ensure(
            s.exact(),
            format!("structure {}: {:?}", s.structure, s.levels),
        )?;
    }
    let window = compare_censuses(&patch, 16, 3);
    ensure(
        window.iter().all(|w| w.black == w.purple),
        format!("{window:?}"),
    )?;
    let counts: Vec<String> = window
        .iter()
        .map(|w| format!("L{} {}", w.level, w.black))
        .collect();
    Ok(format!(
        "3 structures map exactly at levels 0-3; window counts {}",
        counts.join(", ")
    ))
}

fn at_level(p: &LabeledPatch, level: u32) -> LabeledPatch {
    let mut out = LabeledPatch::new(level);
    for t in p.tiles() {
        out.insert(*t).unwrap();
    }
    out
}

fn property_suites() -> Check {
    let t0 = Instant::now();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let label = Label::all().nth(rng.gen_range(0..14)).unwrap();
        let mut coarse = at_level(&generate(label, rng.gen_range(1..4)), 1);
        let centre = HexCoord::new(rng.gen_range(-4..4), rng.gen_range(-4..4));
        let radius = rng.gen_range(0..4);
        coarse.retain(|t| t.at().distance(centre) <= radius);
        if coarse.is_empty() {
            continue;
        }
        let fine = refine(&coarse).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(
            compose(&fine).ok() == Some(coarse),
            format!("compose(refine) differs for seed {seed}"),
        )?;
    }
    let patch = generate(Label::C, 5).to_patch();
    let mut mutations = 0;
    for c in patch.interior(2) {
        let mut local = Patch::new();
        for x in c.spiral(2) {
            local.set(patch.get(x).unwrap());
        }
        let orig = local.orient(c).unwrap();
        for g in PointGroupElement::all().filter(|g| *g != orig) {
            local.set(TileInstance::new(c, g));
            ensure(
                !validate_patch(&local).is_empty(),
                format!("{c} as {g} went unnoticed"),
            )?;
            mutations += 1;
        }
        local.set(TileInstance::new(c, orig));
    }
    let labeled = generate(Label::C, 5);
    let text = write_labeled(&labeled);
    let back = read_labeled(&text).map_err(|e| e.to_string())?;
    ensure(
        write_labeled(&back) == text,
        "serialization round trip differs",
    )?;
    let style = RenderStyle {
        purple: PurpleMode::EdgeShifted,
        parity: true,
        islands: Some(100),
        labels: true,
        ..Default::default()
    };
    ensure(
        render_labeled_svg(&labeled, &style) == render_labeled_svg(&back, &style),
        "render differs",
    )?;
    let t = t0.elapsed();
    within(t, Duration::from_secs(300))?;
    Ok(format!("100 compose/refine seeds, {mutations} mutations caught, round trip and render identical, {t:.2?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("rule consistency", rule_consistency),
        ("honeycomb fraction", honeycomb_fraction),
        ("corona enumeration", corona_enumeration),
        ("unique extension", unique_extension),
        ("paperfolding", paperfolding_ray),
        ("islands", islands),
        ("ruler classification", ruler),
        ("SCD classification", scd),
        ("smallest-spacing symmetry", smallest_symmetry),
        ("purple/black similarity", purple_black),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

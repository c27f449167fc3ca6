use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use monotile::analysis::{
    bits_to_string, compare_censuses, find_islands, island_histogram, paperfolding,
    purple_similarity, purple_view, ray_sequence, RaySpec,
};
use monotile::forcing::{
    enumerate_coronas, find_unique_extension_seed, propagate, role_split, Inference, PartialConfig,
    Region,
};
use monotile::io::{is_labeled, read_labeled, read_patch, write_labeled, write_patch};
use monotile::render::{render_labeled_svg, render_svg, PurpleMode, RenderStyle};
use monotile::rings::{participation_fraction, trace_rings};
use monotile::symmetry::{
    classify, matched_set, participation_bound, ruler_value, smallest_spacing_symmetry, HexModel,
    RulerModel, SampleSpec, ScdModel, Twist,
};
use monotile::{generate, validate_patch, HexCoord, Label, Patch, PointGroupElement, StripeKind};

#[derive(Parser, Debug)]
#[command(
    name = "monotile",
    version,
    about = "Hexagonal monotile tilings: generation, forcing and symmetry analysis"
)]
#[command(args_override_self = true)]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON object whose keys mirror this subcommand's flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print machine-readable JSON instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a patch by repeated substitution of one labelled tile.
    Generate(GenerateArgs),
    /// Count matching-rule violations in a patch file.
    Validate(ValidateArgs),
    /// Enumerate every rule-consistent corona around each centre orientation.
    Coronas(CoronaArgs),
    /// Extend a partial patch by forced placements.
    Propagate(PropagateArgs),
    /// Search three-tile vertex seeds for one that forces a whole disk.
    UniqueSeed(SeedArgs),
    /// Classify a tiling model against the nonperiodicity definition.
    Classify(ClassifyArgs),
    /// Smallest translation with a lattice-like matched set, and its motif.
    SmallestSymmetry(SmallestArgs),
    /// Single-chirality islands enclosed by the other chirality.
    Islands(IslandArgs),
    /// Parity bits along a ray, optionally against the paperfolding sequence.
    Ray(RayArgs),
    /// Draw a patch as SVG.
    Render(RenderArgs),
    /// The one-dimensional ruler tiling and its partial symmetries.
    Ruler(RulerArgs),
    /// Witnesses of one tile of the stacked rhombic model.
    Scd(ScdArgs),
}

#[derive(Args, Debug)]
struct ValidateArgs {
    file: PathBuf,
    /// Also report the black and purple ring censuses.
    #[arg(long)]
    census: bool,
    /// Interior margin for the smallest-ring participation fraction.
    #[arg(long, default_value_t = 4)]
    margin: u32,
    /// Half-width of the centred window comparing ring centroids.
    #[arg(long, default_value_t = 16)]
    window: i32,
    /// Radius of the disk in which purple structures are compared with
    /// the scaled black rings.
    #[arg(long, default_value_t = 24)]
    similarity_radius: u32,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, default_value = "C")]
    seed_label: String,
    #[arg(long)]
    levels: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoronaArgs {
    #[arg(long, default_value_t = 1)]
    radius: u32,
    /// Single centre orientation index 0..12 (rotation + 6 * reflected).
    #[arg(long)]
    center: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InferenceArg {
    Direct,
    Arc,
    Singleton,
}

#[derive(Args, Debug)]
struct PropagateArgs {
    file: PathBuf,
    /// Fill cells within this distance of the patch.
    #[arg(long, default_value_t = 4)]
    radius: u32,
    #[arg(long, value_enum, default_value = "singleton")]
    inference: InferenceArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SeedArgs {
    #[arg(long, default_value_t = 8)]
    radius: u32,
    /// Extra region beyond the target disk that propagation may use.
    #[arg(long, default_value_t = 16)]
    margin: u32,
    /// Evaluate every seed class even after a symmetric one succeeds.
    #[arg(long)]
    exhaustive: bool,
    /// Write the propagated patch here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Ruler,
    Hex,
    Scd,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Dimension of the tiling (defaults to the model's own).
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    radii: Vec<i64>,
    /// Twist for the stacked model: "irrational" or "p/q" (times π).
    #[arg(long, default_value = "irrational")]
    phi: String,
    /// Half-width of the ruler window or of each stacked layer.
    #[arg(long)]
    halfwidth: Option<i64>,
    #[arg(long, default_value_t = 12)]
    layers: i64,
    /// Hex patch file; otherwise `generate C --levels`.
    #[arg(long)]
    patch: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    levels: u32,
    /// Sample this many tiles instead of all.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SmallestArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 20)]
    max_spacing: i64,
    /// Consider only tiles whose disk of this radius lies in the patch.
    #[arg(long, default_value_t = 4)]
    margin: u32,
}

#[derive(Args, Debug)]
struct IslandArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 5000)]
    max_size: usize,
}

#[derive(Args, Debug)]
struct RayArgs {
    file: PathBuf,
    /// Origin as q,r (default: the canonical ray).
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 2,
        allow_negative_numbers = true
    )]
    origin: Option<Vec<i32>>,
    #[arg(long)]
    direction: Option<usize>,
    #[arg(long, default_value_t = 1)]
    step: u32,
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Exit 1 unless the bits equal the paperfolding sequence.
    #[arg(long)]
    compare: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PurpleArg {
    Off,
    Centered,
    EdgeShifted,
}

#[derive(Args, Debug)]
struct RenderArgs {
    file: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    no_black: bool,
    #[arg(long, value_enum, default_value = "off")]
    purple: PurpleArg,
    #[arg(long)]
    parity: bool,
    /// Highlight islands of at most this many tiles.
    #[arg(long)]
    islands: Option<usize>,
    #[arg(long)]
    labels: bool,
}

#[derive(Args, Debug)]
struct RulerArgs {
    #[arg(long, default_value_t = 32)]
    halfwidth: i64,
    /// Report the tiles matched by this translation.
    #[arg(long, default_value_t = 8)]
    translation: i64,
}

#[derive(Args, Debug)]
struct ScdArgs {
    #[arg(long, default_value = "irrational")]
    phi: String,
    #[arg(long, default_value_t = 8)]
    layers: i64,
    #[arg(long, default_value_t = 4)]
    halfwidth: i64,
    /// Tile as layer,m,n.
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 3,
        default_value = "3,0,0",
        allow_negative_numbers = true
    )]
    tile: Vec<i64>,
    #[arg(long, default_value_t = 4)]
    r: i64,
}

/// Failure of a domain check (exit 1) or of the invocation (exit 2).
enum Failure {
    Domain(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_patch(path: &Path) -> Result<Patch, Failure> {
    read_patch(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_out(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn emit<T: Serialize>(json: bool, value: &T, summary: impl FnOnce() -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("reports serialize")
        );
    } else {
        println!("{}", summary());
    }
}

fn parse_twist(s: &str) -> Result<Twist, Failure> {
    if s == "irrational" {
        return Ok(Twist::Irrational);
    }
    let s = s.trim_end_matches("pi").trim_end_matches('π');
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| usage(format!("bad --phi {s:?}: use irrational or p/q")))?;
    let p: u32 = p
        .trim()
        .parse()
        .map_err(|_| usage(format!("bad numerator {p:?}")))?;
    let q: u32 = q
        .trim()
        .parse()
        .map_err(|_| usage(format!("bad denominator {q:?}")))?;
    Twist::rational(p, q).map_err(|e| usage(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Generate(a) => {
            let label: Label = a.seed_label.parse().map_err(usage)?;
            let t0 = Instant::now();
            let patch = generate(label, a.levels);
            let text = write_labeled(&patch);
            match &a.out {
                Some(p) => write_out(p, &text)?,
                None if json => println!("{text}"),
                None => {}
            }
            if a.out.is_some() || !json {
                eprintln!("{} tiles in {:.2?}", patch.len(), t0.elapsed());
            }
        }
        Command::Validate(a) => {
            let patch = load_patch(&a.file)?;
            let report = validate_patch(&patch);
            emit(json, &report, || {
                let mut s = format!("{} violations", report.len());
                for v in report.violations.iter().take(20) {
                    s.push_str(&format!(
                        "\n  {:?} at {} {}",
                        v.rule, v.edge.cell, v.edge.dir
                    ));
                }
                s
            });
            if a.census {
                let black = trace_rings(&patch, StripeKind::Black);
                let interior = patch.interior(a.margin);
                #[derive(Serialize)]
                struct Census {
                    black: Vec<(u32, usize, u32)>,
                    purple: Vec<(u32, usize, u32)>,
                    irregular: (usize, usize),
                    smallest_ring_fraction: f64,
                    interior_tiles: usize,
                    purple_structures: usize,
                    window: Vec<monotile::analysis::LevelComparison>,
                    similarity: Vec<monotile::analysis::StructureSimilarity>,
                }
                let pv = purple_view(&patch);
                let levels = |c: &monotile::rings::RingCensus| {
                    c.by_level
                        .iter()
                        .map(|(l, x)| (*l, x.rings, x.side_length))
                        .collect::<Vec<_>>()
                };
                let census = Census {
                    black: levels(&black),
                    purple: levels(&pv.census),
                    irregular: (black.irregular, pv.census.irregular),
                    smallest_ring_fraction: participation_fraction(&black, &interior, 0),
                    interior_tiles: interior.len(),
                    purple_structures: pv.structures,
                    window: compare_censuses(&patch, a.window, 4),
                    similarity: purple_similarity(&patch, a.similarity_radius, 3),
                };
                emit(json, &census, || {
                    let mut s = String::new();
                    for (name, rows) in [("black", &census.black), ("purple", &census.purple)] {
                        s.push_str(name);
                        for (l, n, side) in rows {
                            s.push_str(&format!(" L{l}:{n} (side {side})"));
                        }
                        s.push('\n');
                    }
                    s.push_str(&format!(
                        "irregular rings: {} black, {} purple\nsmallest black rings through {:.4} of {} interior tiles\n{} purple structures\nring centroids in window:",
                        census.irregular.0, census.irregular.1, census.smallest_ring_fraction, census.interior_tiles, census.purple_structures
                    ));
                    for w in &census.window {
                        s.push_str(&format!(
                            " L{}: {} black / {} purple",
                            w.level, w.black, w.purple
                        ));
                    }
                    for st in &census.similarity {
                        s.push_str(&format!("\npurple structure {}: ", st.structure));
                        let rows: Vec<String> = st
                            .levels
                            .iter()
                            .map(|l| {
                                format!(
                                    "L{} {}/{} unmatched {}",
                                    l.level, l.black, l.purple, l.unmatched
                                )
                            })
                            .collect();
                        s.push_str(&rows.join(", "));
                        s.push_str(if st.exact() {
                            " (similar to black under sqrt3 quarter turn)"
                        } else {
                            " (not similar)"
                        });
                    }
                    s
                });
            }
            if !report.is_empty() {
                return Err(Failure::Domain(format!("{} violations", report.len())));
            }
        }
        Command::Coronas(a) => {
            let centers: Vec<PointGroupElement> = match a.center {
                Some(i) if i < 12 => vec![PointGroupElement::from_index(i)],
                Some(i) => return Err(usage(format!("--center {i} out of range 0..12"))),
                None => PointGroupElement::all().collect(),
            };
            #[derive(Serialize)]
            struct Row {
                center: PointGroupElement,
                solutions: usize,
                stats: monotile::forcing::SearchStats,
                search_space: String,
                role_split: Option<monotile::forcing::RoleSplit>,
            }
            let t0 = Instant::now();
            let rows: Vec<Row> = centers
                .iter()
                .map(|&g| {
                    let e = enumerate_coronas(g, a.radius);
                    Row {
                        center: g,
                        solutions: e.solutions.len(),
                        stats: e.stats,
                        search_space: e.search_space().to_string(),
                        role_split: (a.radius >= 2).then(|| role_split(&e)),
                    }
                })
                .collect();
            emit(json, &rows, || {
                let mut s = String::new();
                for r in &rows {
                    s.push_str(&format!(
                        "center {}: {} solutions (nodes {}, pruned {}, leaves {} + pruned leaves {} = {})",
                        r.center, r.solutions, r.stats.nodes, r.stats.pruned, r.stats.leaves, r.stats.pruned_leaves, r.search_space
                    ));
                    if let Some(rs) = &r.role_split {
                        s.push_str(&format!(
                            "; ring centres {}, hub centres {}, inconsistent {}",
                            rs.ring_centers, rs.hub_centers, rs.inconsistent
                        ));
                    }
                    s.push('\n');
                }
                s.push_str(&format!("elapsed {:.2?}", t0.elapsed()));
                s
            });
            if rows
                .iter()
                .any(|r| r.role_split.as_ref().is_some_and(|rs| rs.inconsistent > 0))
            {
                return Err(Failure::Domain(
                    "completions inconsistent with the honeycomb".into(),
                ));
            }
        }
        Command::Propagate(a) => {
            let patch = load_patch(&a.file)?;
            let mut cells = std::collections::BTreeSet::new();
            for c in patch.coords() {
                cells.extend(c.spiral(a.radius));
            }
            let region = Region {
                cells: cells.into_iter().collect(),
            };
            let inference = match a.inference {
                InferenceArg::Direct => Inference::Direct,
                InferenceArg::Arc => Inference::Arc,
                InferenceArg::Singleton => Inference::Singleton,
            };
            let p = propagate(&PartialConfig::new(patch.clone()), &region, inference)
                .map_err(|c| Failure::Domain(format!("contradiction at {}", c.cell)))?;
            if let Some(out) = &a.out {
                write_out(out, &write_patch(&p.config.patch))?;
            }
            #[derive(Serialize)]
            struct Report<'a> {
                placed: usize,
                forced: &'a [monotile::forcing::ForcedPlacement],
                open: usize,
            }
            let report = Report {
                placed: p.config.patch.len() - patch.len(),
                forced: &p.trace,
                open: p.open.len(),
            };
            emit(json, &report, || {
                format!(
                    "{} forced placements, {} region cells open",
                    report.placed, report.open
                )
            });
        }
        Command::UniqueSeed(a) => {
            let t0 = Instant::now();
            let s = find_unique_extension_seed(a.radius, a.margin, a.exhaustive);
            let seed = s.seed().cloned();
            emit(json, &s, || {
                let mut out = String::new();
                for c in &s.candidates {
                    let tiles: Vec<String> = c
                        .tiles
                        .iter()
                        .map(|t| format!("{}:{}", t.at, t.orient))
                        .collect();
                    out.push_str(&format!(
                        "{} three_fold={} forced_radius={} placed={}\n",
                        tiles.join(" "),
                        c.three_fold,
                        c.forced_radius
                            .map_or("contradiction".to_string(), |r| r.to_string()),
                        c.placed
                    ));
                }
                if s.skipped > 0 {
                    out.push_str(&format!("{} asymmetric classes skipped\n", s.skipped));
                }
                match &seed {
                    Some(c) => out.push_str(&format!(
                        "seed fills the radius-{} disk with zero branch points (three_fold={})\n",
                        a.radius, c.three_fold
                    )),
                    None => out.push_str("no seed fills the disk\n"),
                }
                out.push_str(&format!("elapsed {:.2?}", t0.elapsed()));
                out
            });
            let seed =
                seed.ok_or_else(|| Failure::Domain("no unique-extension seed found".into()))?;
            if let Some(out) = &a.out {
                let config = PartialConfig::new(
                    Patch::from_tiles(seed.tiles).map_err(|e| usage(e.to_string()))?,
                );
                let region = Region::around_vertex(HexCoord::ORIGIN, 0, s.region_radius);
                let p = propagate(&config, &region, Inference::Singleton)
                    .map_err(|c| Failure::Domain(format!("contradiction at {}", c.cell)))?;
                write_out(out, &write_patch(&p.config.patch))?;
            }
        }
        Command::Classify(a) => {
            let sample = match a.sample {
                Some(count) => SampleSpec::Random {
                    count,
                    seed: a.seed,
                },
                None => SampleSpec::All,
            };
            let record = match a.model {
                ModelArg::Ruler => {
                    let m = RulerModel::new(a.halfwidth.unwrap_or(1024));
                    classify(&m, a.n.unwrap_or(1), &a.radii, &sample)
                }
                ModelArg::Hex => {
                    let patch = match &a.patch {
                        Some(p) => load_patch(p)?,
                        None => generate(Label::C, a.levels).to_patch(),
                    };
                    classify(&HexModel::new(patch), a.n.unwrap_or(2), &a.radii, &sample)
                }
                ModelArg::Scd => {
                    let m = ScdModel::new(parse_twist(&a.phi)?, a.layers, a.halfwidth.unwrap_or(6));
                    classify(&m, a.n.unwrap_or(3), &a.radii, &sample)
                }
            };
            if let Some(out) = &a.out {
                write_out(
                    out,
                    &serde_json::to_string_pretty(&record).expect("reports serialize"),
                )?;
            }
            emit(json, &record, || {
                let mut s = format!("{}: {}", record.model, record);
                for r in &record.radii {
                    s.push_str(&format!(
                        "\n  r={}: {}/{} below N={} ({:.4}), flagged {}, common rank {}",
                        r.r,
                        r.below_n,
                        r.sample_size,
                        record.n,
                        r.fraction_below_n,
                        r.flagged,
                        r.global_rank
                    ));
                }
                s
            });
        }
        Command::SmallestSymmetry(a) => {
            let patch = load_patch(&a.file)?;
            let found =
                smallest_spacing_symmetry(&patch, a.max_spacing, a.margin).ok_or_else(|| {
                    Failure::Domain(format!(
                        "no lattice-like symmetry below spacing {}",
                        a.max_spacing
                    ))
                })?;
            emit(json, &found, || {
                format!(
                    "displacement {} (spacing^2 {}), motif {} tiles, orientation census {:?}, clusters {:?}, lattice complete {}",
                    found.displacement,
                    found.spacing_sq,
                    found.motif_size,
                    found.orientation_census,
                    found.clusters,
                    found.lattice_complete
                )
            });
        }
        Command::Islands(a) => {
            let patch = load_patch(&a.file)?;
            let islands = find_islands(&patch, a.max_size);
            #[derive(Serialize)]
            struct Report {
                sizes: std::collections::BTreeMap<usize, usize>,
                with_holes: Vec<(usize, usize, usize)>,
                islands: Vec<monotile::analysis::Island>,
            }
            let mut with_holes: Vec<(usize, usize, usize)> = islands
                .iter()
                .filter(|i| i.enclosed > 0)
                .map(|i| (i.size, i.enclosed, i.total))
                .collect();
            with_holes.dedup();
            let report = Report {
                sizes: island_histogram(&islands),
                with_holes,
                islands,
            };
            emit(json, &report, || {
                let mut s = String::from("island sizes:");
                for (size, count) in &report.sizes {
                    s.push_str(&format!(" {size} (x{count})"));
                }
                for (size, enclosed, total) in &report.with_holes {
                    s.push_str(&format!(
                        "\n  {size} tiles enclosing {enclosed}: {total} total"
                    ));
                }
                s
            });
        }
        Command::Ray(a) => {
            let patch = load_patch(&a.file)?;
            let ray = match (&a.origin, a.direction) {
                (None, None) => RaySpec::CANONICAL,
                (origin, direction) => {
                    let o = origin
                        .as_deref()
                        .unwrap_or(&[RaySpec::CANONICAL.origin.q, RaySpec::CANONICAL.origin.r]);
                    RaySpec {
                        origin: HexCoord::new(o[0], o[1]),
                        direction: direction.unwrap_or(RaySpec::CANONICAL.direction),
                        step: a.step,
                    }
                }
            };
            let bits = ray_sequence(&patch, &ray, a.n);
            let reference = paperfolding(a.n);
            let matches = bits == reference;
            #[derive(Serialize)]
            struct Report {
                ray: RaySpec,
                bits: String,
                paperfolding: String,
                matches: bool,
            }
            let report = Report {
                ray,
                bits: bits_to_string(&bits),
                paperfolding: bits_to_string(&reference),
                matches,
            };
            emit(json, &report, || {
                if a.compare {
                    format!(
                        "{}\n{}\n{}",
                        report.bits,
                        report.paperfolding,
                        if matches { "match" } else { "mismatch" }
                    )
                } else {
                    report.bits.clone()
                }
            });
            if a.compare && !matches {
                return Err(Failure::Domain(
                    "ray bits differ from the paperfolding sequence".into(),
                ));
            }
        }
        Command::Render(a) => {
            let text = read_text(&a.file)?;
            let style = RenderStyle {
                black: !a.no_black,
                purple: match a.purple {
                    PurpleArg::Off => PurpleMode::Off,
                    PurpleArg::Centered => PurpleMode::Centered,
                    PurpleArg::EdgeShifted => PurpleMode::EdgeShifted,
                },
                parity: a.parity,
                islands: a.islands,
                labels: a.labels,
            };
            let labeled =
                is_labeled(&text).map_err(|e| usage(format!("{}: {e}", a.file.display())))?;
            let svg = if labeled {
                render_labeled_svg(
                    &read_labeled(&text).map_err(|e| usage(e.to_string()))?,
                    &style,
                )
            } else {
                render_svg(
                    &read_patch(&text).map_err(|e| usage(e.to_string()))?,
                    &style,
                )
            };
            write_out(&a.out, &svg)?;
        }
        Command::Ruler(a) => {
            let m = RulerModel::new(a.halfwidth);
            let matched = matched_set(&m, &RulerModel::translation(a.translation));
            let values: Vec<Option<u64>> = (-a.halfwidth..=a.halfwidth).map(ruler_value).collect();
            let max_matched = matched.tiles.iter().filter_map(|p| ruler_value(*p)).max();
            let min_unmatched = (-a.halfwidth..=a.halfwidth)
                .filter(|p| !matched.tiles.contains(p))
                .filter_map(ruler_value)
                .min();
            #[derive(Serialize)]
            struct Report {
                values: Vec<Option<u64>>,
                translation: i64,
                matched: Vec<i64>,
                max_matched_value: Option<u64>,
                min_unmatched_value: Option<u64>,
            }
            let report = Report {
                values,
                translation: a.translation,
                matched: matched.tiles.iter().copied().collect(),
                max_matched_value: max_matched,
                min_unmatched_value: min_unmatched,
            };
            emit(json, &report, || {
                let line: Vec<String> = report
                    .values
                    .iter()
                    .map(|v| v.map_or("*".to_string(), |x| x.to_string()))
                    .collect();
                format!(
                    "{}\nT({}) matches {} of {} tiles: every value <= {}, none >= {} and not the blank",
                    line.join(" "),
                    a.translation,
                    report.matched.len(),
                    report.values.len(),
                    max_matched.map_or("-".into(), |v| v.to_string()),
                    min_unmatched.map_or("-".into(), |v| v.to_string())
                )
            });
        }
        Command::Scd(a) => {
            let m = ScdModel::new(parse_twist(&a.phi)?, a.layers, a.halfwidth);
            let tile = (a.tile[0], a.tile[1], a.tile[2]);
            if !(0..a.layers).contains(&tile.0)
                || tile.1.abs() > a.halfwidth
                || tile.2.abs() > a.halfwidth
            {
                return Err(usage(format!("tile {tile:?} outside the window")));
            }
            let b = participation_bound(&m, tile, a.r);
            emit(json, &b, || {
                let names: Vec<&str> = b.witnesses.iter().map(|o| o.name.as_str()).collect();
                format!(
                    "{}: tile {:?} has {} independent witnesses below spacing {} (flagged {}): {}",
                    monotile::symmetry::TilingModel::name(&m),
                    tile,
                    b.count,
                    a.r,
                    b.flagged,
                    names.join(" ")
                )
            });
        }
    }
    Ok(())
}

/// Expands `--config file.json` into flags placed before the command
/// line's own, so explicit flags win.
fn expand_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = args
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(args);
    };
    let (path, drop) = match args[pos].strip_prefix("--config=") {
        Some(p) => (p.to_string(), 1),
        None => (
            args.get(pos + 1).cloned().ok_or("--config needs a file")?,
            2,
        ),
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let Value::Object(map) = value else {
        return Err(format!("{path}: expected a JSON object"));
    };
    let mut rest: Vec<String> = args[..pos]
        .iter()
        .chain(&args[pos + drop..])
        .cloned()
        .collect();
    let Some(cmd) = rest
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|i| i + 1)
    else {
        return Err("--config needs a subcommand".into());
    };
    let mut flags = Vec::new();
    for (key, v) in map {
        if key == "args" {
            let Value::Array(items) = v else {
                return Err(format!("{path}: args must be an array"));
            };
            for item in items {
                flags.push(scalar(&item).ok_or(format!("{path}: bad positional {item}"))?);
            }
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
                flags.push(flag);
                flags.push(
                    parts
                        .ok_or(format!("{path}: bad value for {key}"))?
                        .join(","),
                );
            }
            other => {
                flags.push(flag);
                flags.push(scalar(&other).ok_or(format!("{path}: bad value for {key}"))?);
            }
        }
    }
    let tail = rest.split_off(cmd + 1);
    rest.extend(flags);
    rest.extend(tail);
    Ok(rest)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

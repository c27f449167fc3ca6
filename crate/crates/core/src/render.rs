//! Deterministic SVG output.
//!
//! Hexagons have unit edge and are drawn flat-top: the lattice picture is
//! turned a quarter turn so that edge normals point at 90° + 60k. All
//! numbers are printed with three decimals and elements follow coordinate
//! order, so identical inputs give identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::analysis::find_islands;
use crate::lattice::{HexCoord, Patch, PointGroupElement};
use crate::prototile::{DecorationTable, StripeKind};
use crate::substitution::{Label, LabeledPatch};

pub const BLACK: &str = "#000000";
pub const PURPLE: &str = "#800080";
pub const GRAY: &str = "#BFBFBF";
pub const WHITE: &str = "#FFFFFF";
pub const RED: &str = "#CC0000";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PurpleMode {
    #[default]
    Off,
    /// Through the tile vertices.
    Centered,
    /// Shifted off the vertex along the flag direction.
    EdgeShifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderStyle {
    pub black: bool,
    pub purple: PurpleMode,
    pub parity: bool,
    /// Islands of at most this many tiles are filled red.
    pub islands: Option<usize>,
    pub labels: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            black: true,
            purple: PurpleMode::Off,
            parity: false,
            islands: None,
            labels: false,
        }
    }
}

type Pt = (f64, f64);

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn center(c: HexCoord) -> Pt {
    let (x, y) = c.world();
    // Quarter turn, then flip y for screen coordinates.
    (-y * SQRT3, -x * SQRT3)
}

fn polar(angle_deg: f64, r: f64) -> Pt {
    let a = (angle_deg + 90.0).to_radians();
    (r * a.cos(), -r * a.sin())
}

fn vertex(c: HexCoord, j: usize) -> Pt {
    let (cx, cy) = center(c);
    let (dx, dy) = polar(60.0 * j as f64 + 30.0, 1.0);
    (cx + dx, cy + dy)
}

fn lerp(a: Pt, b: Pt, t: f64) -> Pt {
    (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)
}

fn fmt_pt(p: Pt) -> String {
    format!("{:.3},{:.3}", clean(p.0), clean(p.1))
}

fn clean(x: f64) -> f64 {
    // Avoid "-0.000".
    if x.abs() < 5e-4 {
        0.0
    } else {
        x
    }
}

/// Vertices bounding world edge `k`.
fn edge_vertices(k: usize) -> (usize, usize) {
    ((k + 5) % 6, k % 6)
}

fn black_point(table: &DecorationTable, c: HexCoord, g: PointGroupElement, k: usize) -> Pt {
    let near = table.black_near_vertex(g, k);
    let (v0, v1) = edge_vertices(k);
    let far = if near == v0 { v1 } else { v0 };
    lerp(vertex(c, near), vertex(c, far), 0.25)
}

fn purple_point(
    table: &DecorationTable,
    c: HexCoord,
    g: PointGroupElement,
    j: usize,
    mode: PurpleMode,
) -> Pt {
    let v = vertex(c, j);
    match mode {
        // Matched flags share a world direction, so both tiles meeting at
        // a vertex shift the stripe to the same point.
        PurpleMode::EdgeShifted => {
            let (dx, dy) = polar(30.0 * table.flag_dir(g, j) as f64, 0.25);
            (v.0 + dx, v.1 + dy)
        }
        _ => v,
    }
}

fn stroke(out: &mut String, a: Pt, b: Pt, ctrl: Option<Pt>, color: &str, width: f64) {
    let d = match ctrl {
        Some(q) => format!("M{} Q{} {}", fmt_pt(a), fmt_pt(q), fmt_pt(b)),
        None => format!("M{} L{}", fmt_pt(a), fmt_pt(b)),
    };
    let _ = writeln!(
        out,
        r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="{width:.3}" stroke-linecap="round"/>"#
    );
}

/// Control point for the bend between adjacent ports. Black ports are
/// edges, bending around their shared vertex; purple ports are vertices,
/// bending away from their shared edge.
fn segment_ctrl(kind: StripeKind, c: HexCoord, a: usize, b: usize) -> Option<Pt> {
    if (a + 3) % 6 == b {
        return None;
    }
    let (lo, hi) = if (a + 1) % 6 == b { (a, b) } else { (b, a) };
    Some(match kind {
        StripeKind::Black => lerp(vertex(c, lo), center(c), 0.35),
        StripeKind::Purple => lerp(lerp(vertex(c, lo), vertex(c, hi), 0.5), center(c), 0.5),
    })
}

pub fn render_svg(patch: &Patch, style: &RenderStyle) -> String {
    render(patch, None, style)
}

pub fn render_labeled_svg(patch: &LabeledPatch, style: &RenderStyle) -> String {
    let labels: BTreeMap<HexCoord, Label> = patch.tiles().map(|t| (t.at(), t.label)).collect();
    render(&patch.to_patch(), Some(&labels), style)
}

fn render(
    patch: &Patch,
    labels: Option<&BTreeMap<HexCoord, Label>>,
    style: &RenderStyle,
) -> String {
    let table = DecorationTable::canonical();
    let mut out = String::new();
    let (mut x0, mut y0, mut x1, mut y1) = (0f64, 0f64, 0f64, 0f64);
    let mut first = true;
    for c in patch.coords() {
        for j in 0..6 {
            let (x, y) = vertex(c, j);
            if first {
                (x0, y0, x1, y1) = (x, y, x, y);
                first = false;
            }
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
    }
    let pad = 0.5;
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.3} {:.3} {:.3} {:.3}">"#,
        clean(x0 - pad),
        clean(y0 - pad),
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    );
    let islands: BTreeSet<HexCoord> = match style.islands {
        Some(max) => find_islands(patch, max)
            .into_iter()
            .flat_map(|i| i.tiles)
            .collect(),
        None => BTreeSet::new(),
    };

    let _ = writeln!(
        out,
        r#"<g id="tiles" stroke="{BLACK}" stroke-width="0.040">"#
    );
    for t in patch.tiles() {
        let fill = if islands.contains(&t.at) {
            RED
        } else if style.parity && t.orient.reflected() {
            GRAY
        } else {
            WHITE
        };
        let pts: Vec<String> = (0..6).map(|j| fmt_pt(vertex(t.at, j))).collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{fill}"/>"#,
            pts.join(" ")
        );
    }
    let _ = writeln!(out, "</g>");

    if style.black {
        let _ = writeln!(out, r#"<g id="black">"#);
        for t in patch.tiles() {
            for (a, b) in table.world_segments(StripeKind::Black, t.orient) {
                let pa = black_point(table, t.at, t.orient, a);
                let pb = black_point(table, t.at, t.orient, b);
                stroke(
                    &mut out,
                    pa,
                    pb,
                    segment_ctrl(StripeKind::Black, t.at, a, b),
                    BLACK,
                    0.12,
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    if style.purple != PurpleMode::Off {
        let _ = writeln!(out, r#"<g id="purple">"#);
        for t in patch.tiles() {
            for (a, b) in table.world_segments(StripeKind::Purple, t.orient) {
                let pa = purple_point(table, t.at, t.orient, a, style.purple);
                let pb = purple_point(table, t.at, t.orient, b, style.purple);
                stroke(
                    &mut out,
                    pa,
                    pb,
                    segment_ctrl(StripeKind::Purple, t.at, a, b),
                    PURPLE,
                    0.08,
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    if let (true, Some(labels)) = (style.labels, labels) {
        let _ = writeln!(
            out,
            r#"<g id="labels" font-family="sans-serif" font-size="0.700" text-anchor="middle">"#
        );
        for (c, l) in labels {
            let (x, y) = center(*c);
            let text = if l.barred {
                format!("{}\u{0305}", l.letter.as_char())
            } else {
                l.letter.as_char().to_string()
            };
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}">{text}</text>"#,
                clean(x),
                clean(y + 0.25)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_patch_is_valid_svg() {
        let s = render_svg(&Patch::new(), &RenderStyle::default());
        assert!(s.starts_with("<?xml"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert!(s.contains(r#"<g id="tiles""#));
    }

    #[test]
    fn hexagons_are_flat_top() {
        // Edge 0 faces up after the quarter turn; its vertices are 5 and 0.
        let (a, b) = (vertex(HexCoord::ORIGIN, 5), vertex(HexCoord::ORIGIN, 0));
        assert!((a.1 - b.1).abs() < 1e-9 && a.1 < 0.0);
        assert!(((a.0 - b.0).abs() - 1.0).abs() < 1e-9);
        let up = center(HexCoord::ORIGIN.neighbor(0));
        assert!(up.0.abs() < 1e-9 && (up.1 + SQRT3).abs() < 1e-9);
    }
}

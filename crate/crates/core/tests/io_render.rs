use std::path::PathBuf;

use monotile::io::*;
use monotile::render::*;
use monotile::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Compares against a stored file; `MONOTILE_BLESS=1` rewrites it.
fn check_fixture(name: &str, got: &str) {
    let path = fixture(name);
    if std::env::var_os("MONOTILE_BLESS").is_some() {
        std::fs::write(&path, got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(got == want, "{name} differs from fixture");
}

#[test]
fn labeled_round_trip() {
    let p = generate(Label::C, 5);
    let text = write_labeled(&p);
    assert!(is_labeled(&text).unwrap());
    let back = read_labeled(&text).unwrap();
    assert_eq!(back.level(), p.level());
    assert_eq!(write_labeled(&back), text);
    assert_eq!(read_patch(&text).unwrap(), p.to_patch());
}

#[test]
fn unlabeled_round_trip() {
    let p = generate(Label::C, 4).mirror().to_patch();
    let text = write_patch(&p);
    assert!(!is_labeled(&text).unwrap());
    assert_eq!(read_patch(&text).unwrap(), p);
    assert!(read_labeled(&text).is_err());
}

#[test]
fn rejects_bad_documents() {
    let dup = r#"{"cells": [{"q": 0, "r": 0, "rotation": 0, "reflected": false},
                            {"q": 0, "r": 0, "rotation": 1, "reflected": false}]}"#;
    assert!(matches!(read_patch(dup), Err(FormatError::Duplicate(_))));
    let chir =
        r#"{"cells": [{"q": 1, "r": 0, "rotation": 0, "reflected": false, "label": "Abar"}]}"#;
    let err = read_patch(chir).unwrap_err();
    assert!(matches!(err, FormatError::Cell { .. }), "{err}");
    let letter =
        r#"{"cells": [{"q": 0, "r": 0, "rotation": 0, "reflected": false, "label": "Z"}]}"#;
    assert!(read_patch(letter).is_err());
    assert!(matches!(
        read_patch("{\"cells\": [").unwrap_err(),
        FormatError::Json(_)
    ));
    assert!(read_patch(r#"{"cells": [{"q": 0, "r": 0}]}"#).is_err());
}

#[test]
fn barred_labels_read_back() {
    let one = r#"{"level": 0, "cells": [{"q": 0, "r": 0, "rotation": 2, "reflected": true, "label": "Gbar"}]}"#;
    let p = read_labeled(one).unwrap();
    let t = p.get(HexCoord::ORIGIN).unwrap();
    assert!(t.label.barred);
    assert_eq!(t.label.to_string(), "Gbar");
}

#[test]
fn rendering_is_deterministic() {
    let p = generate(Label::C, 4);
    let style = RenderStyle {
        purple: PurpleMode::EdgeShifted,
        parity: true,
        islands: Some(100),
        labels: true,
        ..Default::default()
    };
    let a = render_labeled_svg(&p, &style);
    let b = render_labeled_svg(&read_labeled(&write_labeled(&p)).unwrap(), &style);
    assert_eq!(a, b);
    assert_eq!(a.matches("<polygon").count(), p.len());
    assert!(a.contains(PURPLE) && a.contains(GRAY));
}

#[test]
fn style_switches_layers() {
    let p = generate(Label::C, 2).to_patch();
    let bare = render_svg(
        &p,
        &RenderStyle {
            black: false,
            ..Default::default()
        },
    );
    assert!(!bare.contains(r#"<g id="black">"#) && !bare.contains(r#"<g id="purple">"#));
    let full = render_svg(
        &p,
        &RenderStyle {
            purple: PurpleMode::Centered,
            ..Default::default()
        },
    );
    assert!(full.contains(r#"<g id="black">"#) && full.contains(r#"<g id="purple">"#));
    // Unlabelled patches have nothing to print.
    assert!(!render_svg(
        &p,
        &RenderStyle {
            labels: true,
            ..Default::default()
        }
    )
    .contains("<text"));
}

#[test]
fn single_tile_fixture() {
    let p = Patch::from_tiles([TileInstance::new(
        HexCoord::ORIGIN,
        PointGroupElement::IDENTITY,
    )])
    .unwrap();
    let svg = render_svg(
        &p,
        &RenderStyle {
            purple: PurpleMode::Centered,
            ..Default::default()
        },
    );
    check_fixture("single_tile.svg", &svg);
}

#[test]
fn level_four_parity_fixture() {
    let p = generate(Label::C, 4).to_patch();
    check_fixture(
        "level4_parity.svg",
        &render_svg(
            &p,
            &RenderStyle {
                parity: true,
                ..Default::default()
            },
        ),
    );
}

#[test]
fn level_two_json_fixture() {
    check_fixture("level2.json", &write_labeled(&generate(Label::C, 2)));
}

use monotile::substitution::{production, EnvironmentError};
use monotile::*;
use proptest::prelude::*;

#[test]
fn tile_counts_per_level() {
    let counts: Vec<usize> = (0..=7).map(|k| generate(Label::C, k).len()).collect();
    assert_eq!(counts, [1, 7, 37, 169, 721, 2977, 12097, 48769]);
}

#[test]
fn generated_patches_obey_the_rules() {
    for label in Label::all() {
        for k in 0..=5 {
            let p = generate(label, k).to_patch();
            assert!(validate_patch(&p).is_empty(), "{label} level {k}");
        }
    }
    assert!(validate_patch(&generate(Label::C, 7).to_patch()).is_empty());
}

#[test]
fn labels_follow_chirality() {
    for t in generate(Label::C, 5).tiles() {
        assert_eq!(t.label.barred, t.orient().reflected());
    }
    let bad = LabeledTile::new(
        TileInstance::new(HexCoord::ORIGIN, PointGroupElement::IDENTITY),
        Label::C_BAR,
    );
    assert_eq!(
        bad.unwrap_err(),
        IntegrityError::LabelChirality(HexCoord::ORIGIN)
    );
}

#[test]
fn barred_seed_is_the_mirror_image() {
    for k in 0..=4 {
        assert_eq!(generate(Label::C_BAR, k), generate(Label::C, k).mirror());
    }
}

#[test]
fn every_production_has_a_central_c() {
    for letter in Letter::ALL {
        let kids = production(letter);
        assert_eq!(kids.len(), 6);
    }
    let one = generate(Label::new(Letter::A, false), 1);
    assert_eq!(one.label(HexCoord::ORIGIN), Some(Label::C));
}

#[test]
fn refine_needs_a_coarse_level() {
    assert_eq!(
        refine(&generate(Label::C, 0)).unwrap_err(),
        IntegrityError::LevelZero
    );
}

#[test]
fn compose_needs_an_anchor() {
    let mut p = generate(Label::C, 2);
    p.retain(|t| t.label.letter != Letter::C);
    assert!(compose(&p).is_err());
}

#[test]
fn compose_inverts_generate() {
    let fine = generate(Label::C, 4);
    let coarse = compose(&fine).unwrap();
    assert_eq!(coarse, at_level(&generate(Label::C, 3), 1));
}

#[test]
fn interior_environments_identify_labels() {
    let p = generate(Label::C, 5);
    let patch = p.to_patch();
    for c in patch.interior(2) {
        match label_environment(&patch, c) {
            Ok(l) => assert_eq!(Some(l), p.label(c), "at {c}"),
            Err(EnvironmentError::Undetermined { .. }) => {}
            Err(e) => panic!("{c}: {e:?}"),
        }
    }
}

fn at_level(p: &LabeledPatch, level: u32) -> LabeledPatch {
    let mut out = LabeledPatch::new(level);
    for t in p.tiles() {
        out.insert(*t).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Composition recovers every coarse patch from its refinement,
    /// including windows cut out of generated patches.
    #[test]
    fn compose_refine_identity(label in 0usize..14, level in 1u32..4, q in -4i32..4, r in -4i32..4, radius in 0u32..4) {
        let label = Label::all().nth(label).unwrap();
        let mut coarse = at_level(&generate(label, level), 1);
        let centre = HexCoord::new(q, r);
        coarse.retain(|t| t.at().distance(centre) <= radius);
        prop_assume!(!coarse.is_empty());
        let fine = refine(&coarse).unwrap();
        prop_assert_eq!(compose(&fine).unwrap(), coarse);
    }
}

use std::collections::BTreeSet;

use monotile::rings::{participation_fraction, sqrt3_coords, trace_rings};
use monotile::*;

#[test]
fn black_census_level_six() {
    let patch = generate(Label::C, 6).to_patch();
    let c = trace_rings(&patch, StripeKind::Black);
    let got: Vec<(u32, usize, u32)> = c
        .by_level
        .iter()
        .map(|(l, x)| (*l, x.rings, x.side_length))
        .collect();
    assert_eq!(
        got,
        [
            (0, 5952, 1),
            (1, 1440, 2),
            (2, 336, 4),
            (3, 72, 8),
            (4, 12, 16)
        ]
    );
    assert_eq!(c.irregular, 0);
}

#[test]
fn every_ring_is_a_regular_truncated_triangle() {
    for k in 3..=7 {
        let patch = generate(Label::C, k).to_patch();
        for kind in [StripeKind::Black, StripeKind::Purple] {
            let c = trace_rings(&patch, kind);
            assert_eq!(c.irregular, 0, "level {k} {kind:?}");
            for r in &c.rings {
                let l = r.level.unwrap();
                assert_eq!(r.side_length, 1 << l);
                assert_eq!(r.len(), 3 << l);
            }
        }
    }
}

#[test]
fn smallest_rings_cover_three_quarters() {
    let patch = generate(Label::C, 6).to_patch();
    let c = trace_rings(&patch, StripeKind::Black);
    let f = participation_fraction(&c, &patch.interior(4), 0);
    assert!((f - 0.75).abs() <= 0.02, "{f}");
}

#[test]
fn ring_levels_form_nested_lattices() {
    // Tiles reached only by rings of level >= j sit on a coset of 2^j Λ.
    let patch = generate(Label::C, 7).to_patch();
    let c = trace_rings(&patch, StripeKind::Black);
    let levels = c.tile_levels();
    let inner: BTreeSet<HexCoord> = patch.interior(40).into_iter().collect();
    for j in 1..=3u32 {
        let m = 1 << j;
        let residues: BTreeSet<(i32, i32)> = levels
            .iter()
            .filter(|(at, l)| **l >= j && inner.contains(at))
            .map(|(at, _)| (at.q.rem_euclid(m), at.r.rem_euclid(m)))
            .collect();
        assert_eq!(residues.len(), 1, "level {j}: {residues:?}");
    }
}

#[test]
fn purple_steps_form_the_root_three_lattice() {
    for j in 0..6 {
        let s = sqrt3_coords(HexCoord::vertex_step(j)).unwrap();
        assert_eq!(s.length(), 1);
    }
}

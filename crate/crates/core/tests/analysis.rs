use monotile::analysis::*;
use monotile::*;

#[test]
fn paperfolding_rule() {
    let s = paperfolding(64);
    assert_eq!(
        &s[..8],
        &[true, true, false, true, true, false, false, true]
    );
    // Odd-indexed terms alternate; term 2k equals term k.
    for (i, k) in (1..=64usize).step_by(2).enumerate() {
        assert_eq!(s[k - 1], i % 2 == 0);
    }
    for k in 1..=32 {
        assert_eq!(s[2 * k - 1], s[k - 1]);
    }
    assert!(paperfolding(0).is_empty());
}

#[test]
fn canonical_ray_is_paperfolding() {
    let patch = generate(Label::C, 8).to_patch();
    let bits = ray_sequence(&patch, &RaySpec::CANONICAL, 64);
    assert_eq!(bits, paperfolding(64));
    assert_eq!(
        bits_to_string(&bits),
        "1101100111001001110110001100100111011001110010001101100011001001"
    );
}

#[test]
fn rays_stop_at_the_boundary() {
    let patch = generate(Label::C, 3).to_patch();
    assert!(ray_sequence(&patch, &RaySpec::CANONICAL, 0).is_empty());
    let off = RaySpec {
        origin: HexCoord::new(500, 0),
        direction: 0,
        step: 1,
    };
    assert!(ray_sequence(&patch, &off, 10).is_empty());
    let long = ray_sequence(&patch, &RaySpec::CANONICAL, 1000);
    assert!(long.len() < 1000 && !long.is_empty());
}

#[test]
fn paperfolding_rays_come_in_a_symmetric_family() {
    let patch = generate(Label::C, 7).to_patch();
    let hits = find_paperfolding_rays(&patch, 2, 48);
    assert!(hits.contains(&(RaySpec::CANONICAL, false)));
    assert_eq!(hits.len(), 6);
}

#[test]
fn parity_field_tracks_chirality() {
    let one = Patch::from_tiles([TileInstance::new(
        HexCoord::ORIGIN,
        PointGroupElement::IDENTITY,
    )])
    .unwrap();
    assert_eq!(parity_field(&one).get(HexCoord::ORIGIN), Some(false));
    let p = generate(Label::C, 6);
    let f = parity_field(&p.to_patch());
    let m = parity_field(&p.mirror().to_patch());
    for (c, b) in &f.bits {
        assert_eq!(m.get(c.mirror()), Some(!b));
    }
    let dark = f.mirrored_count();
    assert!(dark > 0 && dark < f.len());
}

#[test]
fn island_sizes_at_level_seven() {
    let patch = generate(Label::C, 7).to_patch();
    let islands = find_islands(&patch, 10_000);
    let h = island_histogram(&islands);
    assert_eq!(h.keys().copied().collect::<Vec<_>>(), [13, 63, 242]);
    for i in &islands {
        for c in &i.tiles {
            for nb in c.neighbors() {
                let g = patch.orient(nb).unwrap();
                assert!(i.tiles.contains(&nb) || g.reflected() != i.mirrored);
            }
        }
    }
    let big: Vec<&Island> = islands.iter().filter(|i| i.size == 242).collect();
    assert!(big.iter().all(|i| i.enclosed == 13 && i.total == 255));
}

#[test]
fn islands_at_level_eight() {
    let patch = generate(Label::C, 8).to_patch();
    let islands = find_islands(&patch, 10_000);
    assert!(islands.iter().any(|i| i.size == 242 && i.total == 255));
    // The next generation encloses three smaller islands.
    assert!(islands.iter().any(|i| i.size == 908 && i.total == 1023));
}

#[test]
fn islands_swap_under_mirroring() {
    let p = generate(Label::C, 6);
    let a = find_islands(&p.to_patch(), 1000);
    let b = find_islands(&p.mirror().to_patch(), 1000);
    let key = |v: &[Island], dark: bool| {
        let mut s: Vec<usize> = v
            .iter()
            .filter(|i| i.mirrored == dark)
            .map(|i| i.size)
            .collect();
        s.sort();
        s
    };
    assert_eq!(key(&a, true), key(&b, false));
    assert_eq!(key(&a, false), key(&b, true));
}

#[test]
fn purple_rings_match_black_rings() {
    let patch = generate(Label::C, 6).to_patch();
    let pv = purple_view(&patch);
    assert_eq!(pv.structures, 3);
    assert_eq!(pv.census.irregular, 0);
    for row in compare_censuses(&patch, 16, 3) {
        assert_eq!(row.black, row.purple, "level {}", row.level);
    }
    assert!(purple_view(&Patch::new()).census.rings.is_empty());
}

#[test]
fn quarter_turn_similarity_squares_to_minus_three() {
    for c in HexCoord::ORIGIN.spiral(4) {
        let s = sqrt3_quarter_turn(c);
        assert_eq!(s.norm_sq(), 3 * c.norm_sq());
        assert_eq!(sqrt3_quarter_turn(s), c.scale(-3));
    }
}

#[test]
fn each_purple_structure_is_a_scaled_black_hierarchy() {
    for p in [generate(Label::C, 6), generate(Label::C, 6).mirror()] {
        let sims = purple_similarity(&p.to_patch(), 24, 3);
        assert_eq!(sims.len(), 3);
        for s in &sims {
            assert!(s.exact(), "{s:?}");
            assert_eq!(s.levels.len(), 4);
        }
    }
}

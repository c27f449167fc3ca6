use monotile::lattice::{compose_ops, Bounds};
use monotile::*;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = HexCoord> {
    (-40i32..40, -40i32..40).prop_map(|(q, r)| HexCoord::new(q, r))
}

fn element() -> impl Strategy<Value = PointGroupElement> {
    (0usize..12).prop_map(PointGroupElement::from_index)
}

fn motion() -> impl Strategy<Value = Motion> {
    (element(), coord()).prop_map(|(g, t)| Motion::new(g, t))
}

#[test]
fn directions_are_unit_and_opposite() {
    for k in 0..6 {
        assert_eq!(DIRECTIONS[k].length(), 1);
        assert_eq!(DIRECTIONS[k] + DIRECTIONS[(k + 3) % 6], HexCoord::ORIGIN);
        assert_eq!(DIRECTIONS[k].rotate(1), DIRECTIONS[(k + 1) % 6]);
    }
}

#[test]
fn group_has_twelve_distinct_elements() {
    let all: Vec<_> = PointGroupElement::all().collect();
    assert_eq!(all.len(), 12);
    for (i, g) in all.iter().enumerate() {
        assert_eq!(g.index(), i);
        assert_eq!(PointGroupElement::from_index(i), *g);
    }
}

#[test]
fn bad_rotation_is_rejected() {
    assert_eq!(
        PointGroupElement::try_new(6, false),
        Err(UsageError::BadRotation(6))
    );
    assert!(SymmetryOp::translation(HexCoord::ORIGIN).is_err());
}

#[test]
fn ring_and_spiral_sizes() {
    let c = HexCoord::new(3, -2);
    assert_eq!(c.ring(0), vec![c]);
    for r in 1..6 {
        let ring = c.ring(r);
        assert_eq!(ring.len(), 6 * r as usize);
        assert!(ring.iter().all(|x| x.distance(c) == r));
    }
    assert_eq!(c.spiral(3).len(), 37);
}

#[test]
fn patch_rejects_double_placement() {
    let mut p = Patch::new();
    p.place(TileInstance::new(
        HexCoord::ORIGIN,
        PointGroupElement::IDENTITY,
    ))
    .unwrap();
    let err = p
        .place(TileInstance::new(
            HexCoord::ORIGIN,
            PointGroupElement::MIRROR,
        ))
        .unwrap_err();
    assert_eq!(err, UsageError::Occupied(HexCoord::ORIGIN));
    assert_eq!(
        p.bounds(),
        Some(Bounds {
            min_q: 0,
            max_q: 0,
            min_r: 0,
            max_r: 0
        })
    );
}

proptest! {
    #[test]
    fn composition_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
    }

    #[test]
    fn inverse_cancels(a in element(), x in coord()) {
        prop_assert_eq!(a.compose(a.inverse()), PointGroupElement::IDENTITY);
        prop_assert_eq!(a.inverse().apply(a.apply(x)), x);
    }

    #[test]
    fn compose_matches_application(a in element(), b in element(), x in coord()) {
        prop_assert_eq!(a.compose(b).apply(x), a.apply(b.apply(x)));
    }

    #[test]
    fn port_maps_agree_with_geometry(g in element(), k in 0usize..6) {
        prop_assert_eq!(g.apply(DIRECTIONS[k]), DIRECTIONS[g.apply_dir(k)]);
        prop_assert_eq!(g.apply(HexCoord::vertex_step(k)), HexCoord::vertex_step(g.apply_vertex(k)));
        // A 30° direction d lies between edge normals; vertices sit at odd
        // values, edges at even ones.
        prop_assert_eq!(g.apply_dir12(2 * k), 2 * g.apply_dir(k));
        prop_assert_eq!(g.apply_dir12(2 * k + 1), 2 * g.apply_vertex(k) + 1);
    }

    #[test]
    fn motions_preserve_distance(m in motion(), a in coord(), b in coord()) {
        prop_assert_eq!(m.apply(a).distance(m.apply(b)), a.distance(b));
        prop_assert_eq!(m.inverse().apply(m.apply(a)), a);
    }

    #[test]
    fn motion_composition(m in motion(), n in motion(), x in coord()) {
        prop_assert_eq!(compose_ops(m, n).apply(x), m.apply(n.apply(x)));
    }

    #[test]
    fn norm_and_distance(a in coord(), b in coord()) {
        prop_assert_eq!(a.distance(b), (a - b).length());
        prop_assert_eq!(a.rotate(1).norm_sq(), a.norm_sq());
        prop_assert_eq!(a.mirror().norm_sq(), a.norm_sq());
    }

    #[test]
    fn point_group_serde_round_trip(g in element()) {
        let s = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<PointGroupElement>(&s).unwrap(), g);
    }
}

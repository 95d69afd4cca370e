use num_traits::{One, Zero};
use proptest::prelude::*;

use cubefar::cells::voronoi_cells_on_facet;
use cubefar::cube::{dist_on_surface, surface_dist2, symmetry_group, DeltaPoint, FacetLabel};
use cubefar::dynamics::step;
use cubefar::exact::{circumcenter, fmt_rat, int, orient, parse_rat, rat, QPoint, Rat};
use cubefar::farthest::{farthest, farthest_fundamental, in_iota_delta};
use cubefar::oracle::oracle_distance;
use cubefar::region::{classify_delta, psi22_consistency};

fn frac(max: i64) -> impl Strategy<Value = Rat> {
    (1..=max).prop_flat_map(|d| (0..=d).prop_map(move |n| rat(n, d)))
}

/// Points of Δ with small denominators.
fn delta() -> impl Strategy<Value = DeltaPoint> {
    (frac(24), frac(24), frac(24)).prop_map(|(x, y, z)| {
        let mut v = [x / int(2), y / int(2), z / int(2)];
        v.sort();
        let [c, b, a] = v;
        DeltaPoint::new(a, b, c).expect("sorted into Δ")
    })
}

/// Points of the facet `w = 1`.
fn on_goal() -> impl Strategy<Value = QPoint<4>> {
    (frac(16), frac(16), frac(16)).prop_map(|(x, y, z)| QPoint::new([x, y, z, Rat::one()]))
}

/// Arbitrary surface points.
fn on_surface() -> impl Strategy<Value = QPoint<4>> {
    (frac(16), frac(16), frac(16), 0..4usize, any::<bool>()).prop_map(|(x, y, z, axis, hi)| {
        let mut c = vec![x, y, z];
        c.insert(axis, if hi { Rat::one() } else { Rat::zero() });
        QPoint::from_slice(&c).expect("four coordinates")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = rat(n, d);
        prop_assert_eq!(parse_rat(&fmt_rat(&x)).unwrap(), x);
    }

    #[test]
    fn orientation_flips_under_swap(pts in proptest::collection::vec((frac(8), frac(8)), 3)) {
        let q: Vec<QPoint<2>> = pts.into_iter().map(|(x, y)| QPoint::new([x, y])).collect();
        let s = orient(&q).unwrap();
        let swapped = [q[1].clone(), q[0].clone(), q[2].clone()];
        prop_assert_eq!(orient(&swapped).unwrap(), -s);
    }

    #[test]
    fn circumcenter_is_equidistant(pts in proptest::collection::vec((frac(8), frac(8), frac(8)), 4)) {
        let q: Vec<QPoint<3>> = pts.into_iter().map(|(x, y, z)| QPoint::new([x, y, z])).collect();
        if orient(&q).unwrap() != 0 {
            let c = circumcenter(&q).unwrap();
            let r = c.dist2(&q[0]);
            prop_assert!(q.iter().all(|p| c.dist2(p) == r));
        }
    }

    #[test]
    fn reduction_lands_in_delta_and_inverts(q in on_surface()) {
        let d = DeltaPoint::reduce(&q).unwrap();
        prop_assert!(d.c <= d.b && d.b <= d.a && d.a <= rat(1, 2) && d.c >= Rat::zero());
        prop_assert_eq!(d.original(), q);
    }

    #[test]
    fn distance_is_symmetric_and_matches_oracle(p in delta(), q in on_goal()) {
        let sq = dist_on_surface(&p, &q).unwrap();
        let o = oracle_distance(&p.point(), &q, 5).unwrap();
        prop_assert_eq!(&o.sq, &sq);
        let back = DeltaPoint::reduce(&q).unwrap();
        let sq2 = dist_on_surface(&back, &back.witness.apply4(&p.point())).unwrap();
        prop_assert_eq!(sq2, sq);
    }

    #[test]
    fn distance_is_invariant_under_symmetries(p in delta(), q in on_surface(), k in 0usize..384) {
        let g = &symmetry_group(4)[k];
        let moved = surface_dist2(&g.apply4(&p.point()), &g.apply4(&q)).unwrap();
        prop_assert_eq!(dist_on_surface(&p, &q).unwrap(), moved);
    }

    #[test]
    fn farthest_dominates_every_point(p in delta(), q in on_surface()) {
        let f = farthest_fundamental(&p).unwrap();
        prop_assert!(dist_on_surface(&p, &q).unwrap() <= f.sq_dist);
        for fp in &f.points {
            prop_assert_eq!(dist_on_surface(&p, &fp.point).unwrap(), f.sq_dist.clone());
        }
        prop_assert!(in_iota_delta(&f.points[0].point));
    }

    #[test]
    fn farthest_commutes_with_symmetries(p in delta(), k in 0usize..384) {
        let g = &symmetry_group(4)[k];
        let f = farthest_fundamental(&p).unwrap();
        let h = farthest(&g.apply4(&p.point())).unwrap();
        prop_assert_eq!(&h.sq_dist, &f.sq_dist);
        let mut moved: Vec<_> = f.points.iter().map(|fp| g.apply4(&fp.point)).collect();
        let mut got: Vec<_> = h.points.iter().map(|fp| fp.point.clone()).collect();
        moved.sort();
        got.sort();
        prop_assert_eq!(got, moved);
    }

    #[test]
    fn region_tag_is_a_member(p in delta()) {
        let r = classify_delta(&p).unwrap();
        prop_assert!(r.members.contains(&r.tag));
    }

    #[test]
    fn orbit_step_does_not_increase_c(p in delta()) {
        let q = DeltaPoint::reduce(&step(&p.point()).unwrap()).unwrap();
        prop_assert!(q.c <= p.c);
    }

    #[test]
    fn psi22_decomposition(p in delta()) {
        if let Ok((l, r)) = psi22_consistency(&p.a, &p.b, &p.c) {
            prop_assert_eq!(l, r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn goal_cells_partition_the_cube(p in delta()) {
        let c = voronoi_cells_on_facet(&p, FacetLabel::G);
        prop_assert_eq!(c.total_volume(), Rat::one());
        prop_assert!(c.cells.len() <= 26);
    }
}

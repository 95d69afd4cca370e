//! Worked examples through the public API.

use num_traits::One;

use cubefar::cells::{source_unfolding, star_unfolding_3cube, voronoi_cells_3cube, voronoi_cells_on_facet};
use cubefar::corners::{closed_form_center, corner_set, SiteTriple};
use cubefar::cube::{
    dist_on_surface, dist_to_goal, facet_of, source_images_3cube, source_images_4cube, unfold_str, DeltaPoint, FacetLabel,
};
use cubefar::dynamics::{blowup_coords, iterate_orbit, OrbitOptions, Ratio};
use cubefar::exact::{circumcenter, incircle_side, insphere_side, int, orient, rat, QPoint, Rat, Side};
use cubefar::farthest::{farthest, farthest_3cube, farthest_fundamental};
use cubefar::metrics::{center_probe, radius_diameter_exact};
use cubefar::oracle::{enumerate_sequences, oracle_distance};
use cubefar::region::{classify_delta, eval_psi, PsiName, RegionTag};

fn q<const D: usize>(s: &str) -> QPoint<D> {
    s.parse().unwrap()
}

fn dp(a: Rat, b: Rat, c: Rat) -> DeltaPoint {
    DeltaPoint::new(a, b, c).unwrap()
}

#[test]
fn predicates() {
    assert_eq!(orient(&[q::<2>("0,0"), q("1,0"), q("0,1")]).unwrap(), 1);
    assert_eq!(orient(&[q::<2>("0,0"), q("1,1"), q("2,2")]).unwrap(), 0);
    let tri = [q::<2>("0,0"), q("1,0"), q("0,1")];
    assert_eq!(incircle_side(&tri[0], &tri[1], &tri[2], &q("1/2,1/2")).unwrap(), Side::Inside);
    assert_eq!(incircle_side(&tri[0], &tri[1], &tri[2], &q("1,1")).unwrap(), Side::On);
    let tet = [q::<3>("0,0,0"), q("1,0,0"), q("0,1,0"), q("0,0,1")];
    assert_eq!(insphere_side(&tet, &q("2,2,2")).unwrap(), Side::Outside);
    assert_eq!(circumcenter(&[q::<3>("0,0,3"), q("0,2,-1"), q("0,0,-1"), q("2,0,-1")]).unwrap(), q("1,1,1"));
}

#[test]
fn unfoldings_and_sources() {
    assert_eq!(unfold_str("GUS", 4).unwrap().apply4(&q("2/5,1/3,1/6,0")), q("2/5,1/3,17/6,1"));
    let p = dp(rat(2, 5), rat(1, 3), rat(1, 6));
    let imgs = source_images_4cube(&p);
    assert_eq!(imgs.len(), 26);
    let brd = imgs.iter().find(|s| s.label == "BRD").unwrap();
    assert_eq!(brd.point, q("5/3,13/6,-3/5,1"));
    let three = source_images_3cube(&rat(1, 3), &rat(1, 6)).unwrap();
    assert!(three.iter().any(|s| s.label == "F" && s.point == q("1/3,-7/6,1")));
    assert!(three.iter().any(|s| s.label == "R" && s.point == q("8/3,1/6,1")));
    assert_eq!(facet_of(&q("2/5,1/3,0,0")).unwrap(), vec![FacetLabel::D, FacetLabel::S]);
}

#[test]
fn distances() {
    let p = dp(rat(2, 5), rat(1, 3), rat(1, 6));
    let (sq, labels) = dist_to_goal(&p, &q("1,1,1")).unwrap();
    assert_eq!(sq, rat(3329, 900));
    assert_eq!(labels.len(), 4);
    assert_eq!(oracle_distance(&p.point(), &q("1,1,1,1"), 5).unwrap().sq, sq);
    let h = rat(1, 2);
    let c = dp(h.clone(), h.clone(), h);
    assert_eq!(dist_on_surface(&c, &q("1/2,1/2,1/2,1")).unwrap(), int(4));
    assert_eq!(dist_to_goal(&dp(rat(0, 1), rat(0, 1), rat(0, 1)), &q("1,1,1")).unwrap().0, int(6));
    assert_eq!(enumerate_sequences(FacetLabel::S, FacetLabel::G, 3).len(), 6);
}

#[test]
fn regions() {
    assert_eq!(eval_psi(PsiName::Psi1, &[rat(1, 4), rat(1, 8)]).unwrap(), rat(15, 32));
    assert_eq!(eval_psi(PsiName::Psi2, &[rat(1, 2), rat(0, 1)]).unwrap(), rat(-3, 2));
    assert_eq!(eval_psi(PsiName::Psi22, &[rat(0, 1), rat(0, 1), rat(0, 1)]).unwrap(), int(3));
    assert_eq!(classify_delta(&dp(rat(2, 5), rat(1, 3), rat(1, 4))).unwrap().tag, RegionTag::D11);
    assert_eq!(classify_delta(&dp(rat(2, 5), rat(1, 3), rat(0, 1))).unwrap().tag, RegionTag::D33);
}

#[test]
fn corners_and_farthest() {
    let p = dp(rat(2, 5), rat(1, 3), rat(1, 4));
    assert_eq!(corner_set(&p).unwrap().corners.len(), 3);
    let bdr = SiteTriple::new("B", "D", "R").unwrap();
    assert_eq!(closed_form_center(bdr, &p).unwrap().0, q("57/88,39/56,3/4"));
    let f = farthest_fundamental(&p).unwrap();
    assert_eq!(f.points.len(), 1);
    assert_eq!(f.points[0].point, q("57/88,39/56,3/4,1"));
    assert_eq!(f.points[0].witnesses, vec![bdr]);
    let corner = farthest(&q("0,0,0,0")).unwrap();
    assert_eq!(corner.sq_dist, int(6));
    assert_eq!(corner.points[0].point, q("1,1,1,1"));
    let mirrored = farthest(&q("1/2,1/3,1/4,0")).unwrap();
    assert_eq!(mirrored.points.len(), 2);
}

#[test]
fn three_cube() {
    let f = farthest_3cube(&rat(1, 3), &rat(1, 6)).unwrap();
    assert_eq!(f.points, vec![q("31/42,5/6,1")]);
    let z = farthest_3cube(&rat(0, 1), &rat(0, 1)).unwrap();
    assert_eq!(z.points, vec![q("1,1,1")]);
    assert_eq!(farthest_3cube(&rat(1, 2), &rat(1, 4)).unwrap().points.len(), 2);
    let s = star_unfolding_3cube(&rat(1, 3), &rat(1, 6)).unwrap();
    assert_eq!((s.vertices.len(), s.area.clone()), (16, int(6)));
    assert!(s.vertices.iter().any(|v| v.point == q("1/3,-7/6")));
    let top = voronoi_cells_3cube(&rat(1, 3), &rat(1, 6), FacetLabel::U).unwrap();
    assert_eq!(top.cells.len(), 8);
    assert_eq!(top.total_volume(), Rat::one());
}

#[test]
fn cells() {
    let p = dp(rat(2, 5), rat(1, 3), rat(1, 6));
    assert_eq!(voronoi_cells_on_facet(&p, FacetLabel::S).cells.len(), 1);
    let g = voronoi_cells_on_facet(&p, FacetLabel::G);
    assert_eq!(g.total_volume(), Rat::one());
    let m = source_unfolding(&p);
    assert_eq!(m.total_volume(), int(8));
    assert!(m.cells.len() <= 53);
    assert_eq!(m.max_vertex_dist2(), farthest_fundamental(&p).unwrap().sq_dist);
}

#[test]
fn dynamics() {
    let o = iterate_orbit(&q("2/5,1/3,1/4,0"), &OrbitOptions::default()).unwrap();
    assert_eq!(o.iterates[1].point, q("31/88,17/56,1/4,0"));
    let l = o.limit.unwrap().to_f64();
    assert!(l.iter().take(3).all(|x| (x - 0.25).abs() < 1e-9));
    let fixed = iterate_orbit(&q("1/3,1/3,1/3,0"), &OrbitOptions::default()).unwrap();
    assert_eq!(fixed.steps(), 0);
    let b = blowup_coords(&dp(rat(2, 5), rat(1, 3), rat(1, 6)));
    assert_eq!(b.r_xz, Ratio::Finite(rat(12, 5)));
    assert_eq!(blowup_coords(&dp(rat(2, 5), rat(1, 3), rat(0, 1))).r_2, Ratio::Infinite);
}

#[test]
fn metrics() {
    let r = radius_diameter_exact(4, &rat(1, 8)).unwrap();
    assert_eq!((r.radius_sq.unwrap(), r.diameter_sq.unwrap()), (int(4), int(6)));
    assert!((r.ratio - 2.0 / 6f64.sqrt()).abs() < 1e-15);
    let (corner, opposite) = center_probe(10, None).unwrap();
    assert!((corner - 17.0 / 4.0).abs() < 1e-9 && (opposite - 4.0).abs() < 1e-9);
}

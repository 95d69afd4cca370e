//! The farthest-point map on ∂I³ and ∂I⁴.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::corners::{corner_set, is_voronoi_vertex, theorem_candidates, SiteTriple};
use crate::cells::voronoi_cells_3cube;
use crate::cube::{goal_site, stabilizer, DeltaPoint, FacetLabel, Isometry};
use crate::exact::{int, rat, QPoint, Rat};
use crate::region::RegionTag;
use crate::Error;

/// One farthest point with the triples whose circumcenter realizes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FarthestPoint {
    pub point: QPoint<4>,
    pub witnesses: Vec<SiteTriple>,
}

/// The farthest set of a source with the common squared distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FarthestResult {
    pub points: Vec<FarthestPoint>,
    #[serde(with = "crate::exact::rat_serde")]
    pub sq_dist: Rat,
}

/// Farthest set on ∂I³ of a source on D.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Farthest3 {
    pub points: Vec<QPoint<3>>,
    #[serde(with = "crate::exact::rat_serde")]
    pub sq_dist: Rat,
}

/// The circumcenter of `p_F, p_R, p_B` for the source `(a, b, 0)`, and its
/// mirror image across `x = 1/2` when `a = 1/2`. This is the farthest set
/// only in part of the domain; see [`farthest_3cube`].
pub fn closed_form_3cube(a: &Rat, b: &Rat) -> Result<Vec<QPoint<3>>, Error> {
    let (zero, half) = (Rat::zero(), rat(1, 2));
    if !(zero <= *b && b <= a && *a <= half) {
        return Err(Error::OutOfDomain(format!("({a},{b}) is not in 0 ≤ b ≤ a ≤ 1/2")));
    }
    let one = Rat::one();
    let x = &one - (a + int(2) * b * (&one - b)) / (int(3) - int(2) * a);
    let mut out = vec![QPoint::new([x.clone(), &one - b, one.clone()])];
    if *a == half {
        out.push(QPoint::new([&one - &x, &one - b, one]));
    }
    Ok(out)
}

/// Farthest points on ∂I³ of `(a, b, 0)` with `0 ≤ b ≤ a ≤ 1/2`: the exact
/// argmax of the distance over the vertices of the Voronoi cells of the
/// source images on all six facets, sorted.
pub fn farthest_3cube(a: &Rat, b: &Rat) -> Result<Farthest3, Error> {
    let mut best: Option<Rat> = None;
    let mut points: Vec<QPoint<3>> = Vec::new();
    for &f in FacetLabel::for_dim(3) {
        let cx = voronoi_cells_3cube(a, b, f)?;
        for cell in &cx.cells {
            for v in &cell.vertices {
                let d = v.iter().zip(&cell.site).map(|(x, y)| (x - y) * (x - y)).fold(Rat::zero(), |s, t| s + t);
                if best.as_ref().is_some_and(|m| d < *m) {
                    continue;
                }
                let mut w = v.clone();
                w.insert(f.axis(), int(f.side() as i64));
                let q = QPoint::from_slice(&w)?;
                if best.as_ref() != Some(&d) {
                    best = Some(d);
                    points.clear();
                }
                if !points.contains(&q) {
                    points.push(q);
                }
            }
        }
    }
    points.sort_by(|p, q| p.0.cmp(&q.0));
    let sq_dist = best.ok_or_else(|| Error::Inconsistent("no Voronoi vertex".into()))?;
    Ok(Farthest3 { points, sq_dist })
}

/// Whether the closed form of [`closed_form_3cube`] is the farthest set.
pub fn closed_form_3cube_holds(a: &Rat, b: &Rat) -> Result<bool, Error> {
    let mut c = closed_form_3cube(a, b)?;
    c.sort_by(|p, q| p.0.cmp(&q.0));
    Ok(farthest_3cube(a, b)?.points == c)
}

/// `(1−x, 1−y, 1−z, 0)` lies in Δ, i.e. `1/2 ≤ x ≤ y ≤ z ≤ 1` on G.
pub fn in_iota_delta(q: &QPoint<4>) -> bool {
    let half = rat(1, 2);
    q[3] == Rat::one() && half <= q[0] && q[0] <= q[1] && q[1] <= q[2] && q[2] <= Rat::one()
}

/// ι(x) = 1 − x coordinatewise.
pub fn iota<const D: usize>(q: &QPoint<D>) -> QPoint<D> {
    QPoint::new(std::array::from_fn(|k| Rat::one() - &q[k]))
}

fn add_point(points: &mut Vec<FarthestPoint>, q: QPoint<4>, w: &[SiteTriple]) {
    if let Some(fp) = points.iter_mut().find(|fp| fp.point == q) {
        for t in w {
            if !fp.witnesses.contains(t) {
                fp.witnesses.push(*t);
            }
        }
    } else {
        points.push(FarthestPoint { point: q, witnesses: w.to_vec() });
    }
}

fn close_under(points: Vec<FarthestPoint>, group: &[&Isometry]) -> Vec<FarthestPoint> {
    let mut out = Vec::new();
    for fp in &points {
        add_point(&mut out, fp.point.clone(), &fp.witnesses);
    }
    for g in group {
        for fp in &points {
            add_point(&mut out, g.apply4(&fp.point), &fp.witnesses);
        }
    }
    out
}

/// Farthest set of `p ∈ Δ`: exact argmax of |p_U − ·|² over the corners of
/// the Voronoi domain of p_U, closed under the stabilizer of p.
pub fn farthest_fundamental(p: &DeltaPoint) -> Result<FarthestResult, Error> {
    let cs = corner_set(p)?;
    let u = goal_site(p, "U");
    let mut best: Option<Rat> = None;
    let mut points: Vec<FarthestPoint> = Vec::new();
    for c in &cs.corners {
        if !is_voronoi_vertex(p, &c.point) {
            continue;
        }
        let d = c.point.dist2(&u);
        let q = QPoint::new([c.point[0].clone(), c.point[1].clone(), c.point[2].clone(), Rat::one()]);
        match best.as_ref().map(|b| d.cmp(b)) {
            Some(std::cmp::Ordering::Less) => continue,
            Some(std::cmp::Ordering::Greater) | None => {
                best = Some(d);
                points.clear();
                add_point(&mut points, q, &[c.triple]);
            }
            Some(std::cmp::Ordering::Equal) => add_point(&mut points, q, &[c.triple]),
        }
    }
    let sq_dist = best.ok_or_else(|| Error::Inconsistent(format!("no Voronoi corner at {p}")))?;
    for fp in &points {
        if !in_iota_delta(&fp.point) {
            return Err(Error::Inconsistent(format!("farthest point {} not in ιΔ", fp.point)));
        }
    }
    let stab = stabilizer(&p.point().0);
    Ok(FarthestResult { points: close_under(points, &stab), sq_dist })
}

/// Farthest set of any point of ∂I⁴, by symmetry transport from Δ.
pub fn farthest(p: &QPoint<4>) -> Result<FarthestResult, Error> {
    let d = DeltaPoint::reduce(p)?;
    let r = farthest_fundamental(&d)?;
    let back = d.witness.inverse();
    let points: Vec<FarthestPoint> = r
        .points
        .into_iter()
        .map(|fp| FarthestPoint { point: back.apply4(&fp.point), witnesses: fp.witnesses })
        .collect();
    let stab = stabilizer(&p.0);
    Ok(FarthestResult { points: close_under(points, &stab), sq_dist: r.sq_dist })
}

/// Whether every farthest point of `p` is the center of a triple in the
/// theorem's candidate set of some region containing p.
pub fn agrees_with_theorem(p: &DeltaPoint, r: &FarthestResult) -> Result<bool, Error> {
    let cs = corner_set(p)?;
    let mut allowed: Vec<QPoint<4>> = Vec::new();
    for reg in &cs.region.members {
        for tr in theorem_candidates(*reg) {
            if let Some(c) = cs.corners.iter().find(|c| c.triple == *tr) {
                let q = &c.point;
                allowed.push(QPoint::new([q[0].clone(), q[1].clone(), q[2].clone(), Rat::one()]));
            }
        }
    }
    let stab = stabilizer(&p.point().0);
    Ok(r.points.iter().all(|fp| {
        allowed.contains(&fp.point) || stab.iter().any(|g| allowed.contains(&g.apply4(&fp.point)))
    }))
}

/// Regions where the theorem names a unique farthest corner.
pub fn unique_in_theorem(r: RegionTag) -> bool {
    theorem_candidates(r).len() == 1
}

//! Exact Voronoi cells of source images on a facet, the source unfolding of
//! ∂I⁴, and the star unfolding of ∂I³.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cube::{
    dist_3cube_fundamental, facets_containing, src_all_facets, src_labels_3cube, unfold_str,
    DeltaPoint, FacetLabel,
};
use crate::exact::{fmt_rat, int, QPoint, Rat};
use crate::Error;

/// Closed half-space `{x : normal·x ≤ offset}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl HalfSpace {
    fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.normal, x) - &self.offset
    }

    /// Points at least as close to `own` as to `other`.
    pub fn closer_to(own: &[Rat], other: &[Rat]) -> Option<HalfSpace> {
        if own == other {
            return None;
        }
        let normal = other.iter().zip(own).map(|(t, s)| (t - s) * int(2)).collect();
        let offset = dot(other, other) - dot(own, own);
        Some(HalfSpace { normal, offset })
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rat::zero(), |s, t| s + t)
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn affine_rank(pts: &[&Vec<Rat>]) -> usize {
    match pts.split_first() {
        None => 0,
        Some((p0, rest)) => rank(rest.iter().map(|p| sub(p, p0)).collect()),
    }
}

/// A full-dimensional convex polytope in dimension 2 or 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    pub vertices: Vec<Vec<Rat>>,
    /// Facets as cyclic vertex lists, counterclockwise seen from outside
    /// (in dimension 2, the edges).
    pub faces: Vec<Vec<usize>>,
    pub volume: Rat,
}

fn unit_cube(d: usize) -> Vec<HalfSpace> {
    let mut out = Vec::new();
    for k in 0..d {
        let mut e = vec![Rat::zero(); d];
        e[k] = -Rat::one();
        out.push(HalfSpace { normal: e.clone(), offset: Rat::zero() });
        e[k] = Rat::one();
        out.push(HalfSpace { normal: e, offset: Rat::one() });
    }
    out
}

fn centroid(pts: &[&Vec<Rat>]) -> Vec<Rat> {
    let n = int(pts.len() as i64);
    (0..pts[0].len())
        .map(|k| pts.iter().fold(Rat::zero(), |s, p| s + &p[k]) / &n)
        .collect()
}

fn angle_cmp(u: &[Rat; 2], v: &[Rat; 2]) -> Ordering {
    let half = |w: &[Rat; 2]| !(w[1].is_positive() || (w[1].is_zero() && w[0].is_positive()));
    half(u).cmp(&half(v)).then_with(|| {
        let cross = &u[0] * &v[1] - &u[1] * &v[0];
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Sorts `idx` counterclockwise around their centroid in the projection
/// dropping coordinate `drop`.
fn sort_cyclic(verts: &[Vec<Rat>], idx: &mut [usize], drop: Option<usize>) {
    let proj = |v: &Vec<Rat>| -> [Rat; 2] {
        let mut it = v.iter().enumerate().filter(|(k, _)| Some(*k) != drop).map(|(_, x)| x.clone());
        [it.next().expect("2 coords"), it.next().expect("2 coords")]
    };
    let pts: Vec<&Vec<Rat>> = idx.iter().map(|&i| &verts[i]).collect();
    let m = proj(&centroid(&pts));
    idx.sort_by(|&i, &j| {
        let (a, b) = (proj(&verts[i]), proj(&verts[j]));
        angle_cmp(&[&a[0] - &m[0], &a[1] - &m[1]], &[&b[0] - &m[0], &b[1] - &m[1]])
    });
}

fn det3(a: &[Rat], b: &[Rat], c: &[Rat]) -> Rat {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Intersection of the unit cube `[0,1]^d` with the given half-spaces, or
/// `None` when it is empty or not full-dimensional.
pub fn clip_unit_cube(d: usize, extra: &[HalfSpace]) -> Option<Polytope> {
    assert!(d == 2 || d == 3, "dimension 2 or 3");
    let mut hs = unit_cube(d);
    let mut verts: Vec<(Vec<Rat>, Vec<usize>)> = (0..1usize << d)
        .map(|m| {
            let v: Vec<Rat> = (0..d).map(|k| int(((m >> k) & 1) as i64)).collect();
            let tight = (0..2 * d).filter(|&j| hs[j].eval(&v).is_zero()).collect();
            (v, tight)
        })
        .collect();
    for h in extra {
        let j = hs.len();
        hs.push(h.clone());
        let vals: Vec<Rat> = verts.iter().map(|(v, _)| h.eval(v)).collect();
        if vals.iter().all(|x| !x.is_positive()) {
            for (k, x) in vals.iter().enumerate() {
                if x.is_zero() {
                    verts[k].1.push(j);
                }
            }
            continue;
        }
        let mut next: Vec<(Vec<Rat>, Vec<usize>)> = Vec::new();
        for (k, (v, t)) in verts.iter().enumerate() {
            if !vals[k].is_positive() {
                let mut t = t.clone();
                if vals[k].is_zero() {
                    t.push(j);
                }
                next.push((v.clone(), t));
            }
        }
        for (iu, (u, tu)) in verts.iter().enumerate() {
            if !vals[iu].is_negative() {
                continue;
            }
            for (iw, (w, tw)) in verts.iter().enumerate() {
                if !vals[iw].is_positive() {
                    continue;
                }
                let common: Vec<usize> = tu.iter().copied().filter(|x| tw.contains(x)).collect();
                if common.len() < d - 1 || rank(common.iter().map(|&c| hs[c].normal.clone()).collect()) < d - 1 {
                    continue;
                }
                let t = &vals[iu] / (&vals[iu] - &vals[iw]);
                let x: Vec<Rat> = u.iter().zip(w).map(|(a, b)| a + (b - a) * &t).collect();
                if next.iter().any(|(y, _)| *y == x) {
                    continue;
                }
                let tight = (0..=j).filter(|&c| hs[c].eval(&x).is_zero()).collect();
                next.push((x, tight));
            }
        }
        verts = next;
        if verts.len() <= d {
            return None;
        }
    }
    let pts: Vec<&Vec<Rat>> = verts.iter().map(|(v, _)| v).collect();
    if affine_rank(&pts) < d {
        return None;
    }
    let vertices: Vec<Vec<Rat>> = verts.iter().map(|(v, _)| v.clone()).collect();
    let c = centroid(&pts);
    let mut faces: Vec<Vec<usize>> = Vec::new();
    if d == 2 {
        let mut idx: Vec<usize> = (0..vertices.len()).collect();
        sort_cyclic(&vertices, &mut idx, None);
        let n = idx.len();
        let mut area = Rat::zero();
        for k in 0..n {
            let (a, b) = (&vertices[idx[k]], &vertices[idx[(k + 1) % n]]);
            area += &a[0] * &b[1] - &a[1] * &b[0];
            faces.push(vec![idx[k], idx[(k + 1) % n]]);
        }
        return Some(Polytope { vertices, faces, volume: area / int(2) });
    }
    let mut volume = Rat::zero();
    for (j, h) in hs.iter().enumerate() {
        let mut idx: Vec<usize> = (0..verts.len()).filter(|&i| verts[i].1.contains(&j)).collect();
        if idx.len() < 3 || affine_rank(&idx.iter().map(|&i| &vertices[i]).collect::<Vec<_>>()) < 2 {
            continue;
        }
        let mut key = idx.clone();
        key.sort_unstable();
        if faces.iter().any(|f| {
            let mut g = f.clone();
            g.sort_unstable();
            g == key
        }) {
            continue;
        }
        let drop = (0..3).max_by(|&a, &b| h.normal[a].abs().cmp(&h.normal[b].abs()));
        sort_cyclic(&vertices, &mut idx, drop);
        let (v0, v1, v2) = (&vertices[idx[0]], &vertices[idx[1]], &vertices[idx[2]]);
        if det3(&sub(v1, v0), &sub(v2, v0), &sub(v0, &c)).is_negative() {
            idx.reverse();
        }
        for k in 1..idx.len() - 1 {
            let (a, b, e) = (&vertices[idx[0]], &vertices[idx[k]], &vertices[idx[k + 1]]);
            volume += det3(&sub(a, &c), &sub(b, &c), &sub(e, &c)).abs();
        }
        faces.push(idx);
    }
    Some(Polytope { vertices, faces, volume: volume / int(6) })
}

fn ser_points<S: Serializer>(pts: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for p in pts {
        seq.serialize_element(&p.iter().map(fmt_rat).collect::<Vec<_>>())?;
    }
    seq.end()
}

fn ser_point<S: Serializer>(p: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(fmt_rat))
}

/// One Voronoi cell: the points of `facet` whose nearest source image is
/// `label`. Coordinates are in the chart of the complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub facet: FacetLabel,
    pub label: String,
    #[serde(serialize_with = "ser_point")]
    pub site: Vec<Rat>,
    #[serde(serialize_with = "ser_points")]
    pub vertices: Vec<Vec<Rat>>,
    pub faces: Vec<Vec<usize>>,
    #[serde(with = "crate::exact::rat_serde")]
    pub volume: Rat,
}

/// A family of cells sharing one chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellComplex {
    /// Dimension of the cells (2 on ∂I³, 3 on ∂I⁴).
    pub dim: usize,
    /// Facet whose affine hull carries the coordinates.
    pub chart: FacetLabel,
    pub cells: Vec<Cell>,
}

impl CellComplex {
    pub fn total_volume(&self) -> Rat {
        self.cells.iter().fold(Rat::zero(), |s, c| s + &c.volume)
    }

    /// Largest squared distance from a cell vertex to its own site.
    pub fn max_vertex_dist2(&self) -> Rat {
        self.cells
            .iter()
            .flat_map(|c| c.vertices.iter().map(move |v| dot(&sub(v, &c.site), &sub(v, &c.site))))
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

fn drop_axis(v: &[Rat], axis: usize) -> Vec<Rat> {
    v.iter().enumerate().filter(|(k, _)| *k != axis).map(|(_, x)| x.clone()).collect()
}

fn insert_axis(v: &[Rat], axis: usize, value: Rat) -> Vec<Rat> {
    let mut out = v.to_vec();
    out.insert(axis, value);
    out
}

fn cells_from_sites(facet: FacetLabel, sites: &[(String, Vec<Rat>)]) -> Vec<Cell> {
    let d = sites.first().map_or(0, |s| s.1.len());
    let mut out = Vec::new();
    for (i, (label, s)) in sites.iter().enumerate() {
        if sites[..i].iter().any(|(_, t)| t == s) {
            continue;
        }
        let hs: Vec<HalfSpace> = sites
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .filter_map(|(_, (_, t))| HalfSpace::closer_to(s, t))
            .collect();
        if let Some(poly) = clip_unit_cube(d, &hs) {
            out.push(Cell {
                facet,
                label: label.clone(),
                site: s.clone(),
                vertices: poly.vertices,
                faces: poly.faces,
                volume: poly.volume,
            });
        }
    }
    out
}

fn facet_cells_4(p: &DeltaPoint, f: FacetLabel, imgs: &[crate::cube::SourceImage<4>]) -> Vec<Cell> {
    let axis = f.axis();
    let sites: Vec<(String, Vec<Rat>)> =
        imgs.iter().map(|s| (s.label.clone(), drop_axis(&s.point.0, axis))).collect();
    let _ = p;
    cells_from_sites(f, &sites)
}

/// Voronoi cells of src(F) on the facet F of ∂I⁴, in the chart of aff(F)
/// with the fixed coordinate dropped. Empty and lower-dimensional cells are
/// omitted.
pub fn voronoi_cells_on_facet(p: &DeltaPoint, f: FacetLabel) -> CellComplex {
    let all = src_all_facets(p);
    let imgs = &all.iter().find(|(g, _)| *g == f).expect("facet of the 4-cube").1;
    CellComplex { dim: 3, chart: f, cells: facet_cells_4(p, f, imgs) }
}

/// Voronoi cells on facet F of ∂I³ for the source `(a, b, 0)`.
pub fn voronoi_cells_3cube(a: &Rat, b: &Rat, f: FacetLabel) -> Result<CellComplex, Error> {
    let base = [a.clone(), b.clone(), Rat::zero()];
    dist_3cube_fundamental(a, b, &QPoint::new(base.clone()))?;
    let axis = f.axis();
    let sites: Vec<(String, Vec<Rat>)> = src_labels_3cube(f)?
        .into_iter()
        .map(|seq| {
            let img = unfold_str(&seq, 3).expect("valid sequence").apply(&base);
            (seq, drop_axis(&img, axis))
        })
        .collect();
    Ok(CellComplex { dim: 2, chart: f, cells: cells_from_sites(f, &sites) })
}

/// The source unfolding: every Voronoi cell of every facet carried back to
/// aff(S) by the inverse of its unfolding. Sites all coincide with p.
pub fn source_unfolding(p: &DeltaPoint) -> CellComplex {
    use rayon::prelude::*;
    let all = src_all_facets(p);
    let cells: Vec<Cell> = all
        .par_iter()
        .flat_map_iter(|(f, imgs)| {
            let axis = f.axis();
            let fixed = int(f.side() as i64);
            facet_cells_4(p, *f, imgs).into_iter().map(move |c| {
                let back = unfold_str(&c.label, 4).expect("valid sequence").inverse();
                let s_axis = FacetLabel::S.axis();
                let map = |v: &[Rat]| drop_axis(&back.apply(&insert_axis(v, axis, fixed.clone())), s_axis);
                Cell {
                    vertices: c.vertices.iter().map(|v| map(v)).collect(),
                    site: map(&c.site),
                    ..c
                }
            })
        })
        .collect();
    CellComplex { dim: 3, chart: FacetLabel::S, cells }
}

/// A vertex of the star-unfolding polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarVertex {
    /// Source-image sequence, or `v` followed by the cube vertex coordinates.
    pub label: String,
    pub point: QPoint<2>,
}

/// The star unfolding of ∂I³ from `(a, b, 0)` in the chart of aff(U).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarPolygon {
    pub vertices: Vec<StarVertex>,
    #[serde(with = "crate::exact::rat_serde")]
    pub area: Rat,
}

/// Source images of src(U) interleaved with the unfolded cube vertices:
/// between two angularly consecutive images sits the vertex image that is
/// at the geodesic distance of that cube vertex from both.
pub fn star_unfolding_3cube(a: &Rat, b: &Rat) -> Result<StarPolygon, Error> {
    let base = [a.clone(), b.clone(), Rat::zero()];
    let u = FacetLabel::U;
    let mut imgs: Vec<(String, Vec<Rat>)> = Vec::new();
    for seq in src_labels_3cube(u)? {
        let x = drop_axis(&unfold_str(&seq, 3)?.apply(&base), u.axis());
        if !imgs.iter().any(|(_, y)| *y == x) {
            imgs.push((seq, x));
        }
    }
    let mut idx: Vec<usize> = (0..imgs.len()).collect();
    let pts: Vec<Vec<Rat>> = imgs.iter().map(|i| i.1.clone()).collect();
    {
        let h = Rat::new(1.into(), 2.into());
        let key = |i: usize| [&pts[i][0] - &h, &pts[i][1] - &h];
        idx.sort_by(|&i, &j| angle_cmp(&key(i), &key(j)));
    }
    let mut cands: Vec<(String, Vec<Rat>, Rat)> = Vec::new();
    for m in 0..8usize {
        let v: Vec<Rat> = (0..3).map(|k| int(((m >> k) & 1) as i64)).collect();
        let g = dist_3cube_fundamental(a, b, &QPoint::new([v[0].clone(), v[1].clone(), v[2].clone()]))?;
        let name = format!("v{}{}{}", m & 1, (m >> 1) & 1, (m >> 2) & 1);
        for f in facets_containing(&v)? {
            let lf = FacetLabel::from_facet(f).expect("3-cube facet");
            let img = match lf {
                FacetLabel::U => v.clone(),
                FacetLabel::D => continue,
                _ => unfold_str(&format!("U{lf}"), 3)?.apply(&v),
            };
            let x = drop_axis(&img, u.axis());
            if !cands.iter().any(|(_, y, _)| *y == x) {
                cands.push((name.clone(), x, g.clone()));
            }
        }
    }
    let d2 = |x: &[Rat], y: &[Rat]| dot(&sub(x, y), &sub(x, y));
    let mut out: Vec<StarVertex> = Vec::new();
    let q2 = |v: &[Rat]| QPoint::new([v[0].clone(), v[1].clone()]);
    let n = idx.len();
    for k in 0..n {
        let (l0, p0) = &imgs[idx[k]];
        let p1 = &imgs[idx[(k + 1) % n]].1;
        out.push(StarVertex { label: l0.clone(), point: q2(p0) });
        let reflex = |x: &[Rat]| {
            let (u, w) = (sub(x, p0), sub(p1, x));
            (&u[0] * &w[1] - &u[1] * &w[0]).is_negative()
        };
        let hit = cands.iter().find(|(_, x, g)| d2(x, p0) == *g && d2(x, p1) == *g && reflex(x));
        if let Some((name, x, _)) = hit {
            out.push(StarVertex { label: name.clone(), point: q2(x) });
        }
    }
    let m = out.len();
    let mut area = Rat::zero();
    for k in 0..m {
        let (p, q) = (&out[k].point, &out[(k + 1) % m].point);
        area += &p[0] * &q[1] - &p[1] * &q[0];
    }
    Ok(StarPolygon { vertices: out, area: area / int(2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::farthest::farthest_fundamental;

    #[test]
    fn cube_clip() {
        let p = clip_unit_cube(3, &[]).unwrap();
        assert_eq!(p.vertices.len(), 8);
        assert_eq!(p.faces.len(), 6);
        assert_eq!(p.volume, int(1));
        let h = HalfSpace { normal: vec![int(1), int(1), int(1)], offset: int(1) };
        let t = clip_unit_cube(3, &[h]).unwrap();
        assert_eq!(t.vertices.len(), 4);
        assert_eq!(t.volume, rat(1, 6));
        let h = HalfSpace { normal: vec![int(1), int(0)], offset: int(0) };
        assert!(clip_unit_cube(2, &[h]).is_none());
    }

    #[test]
    fn facet_cells() {
        let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 6)).unwrap();
        let s = voronoi_cells_on_facet(&p, FacetLabel::S);
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.total_volume(), int(1));
        let g = voronoi_cells_on_facet(&p, FacetLabel::G);
        assert_eq!(g.total_volume(), int(1));
        assert!(g.cells.len() <= 26);
    }

    #[test]
    fn three_cube_top() {
        let c = voronoi_cells_3cube(&rat(1, 3), &rat(1, 6), FacetLabel::U).unwrap();
        assert_eq!(c.cells.len(), 8);
        assert_eq!(c.total_volume(), int(1));
    }

    #[test]
    fn source_unfolding_volume() {
        let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 4)).unwrap();
        let su = source_unfolding(&p);
        assert_eq!(su.total_volume(), int(8));
        assert!(su.cells.len() <= 53);
        assert_eq!(su.max_vertex_dist2(), farthest_fundamental(&p).unwrap().sq_dist);
    }

    #[test]
    fn star() {
        let s = star_unfolding_3cube(&rat(1, 3), &rat(1, 6)).unwrap();
        assert_eq!(s.vertices.len(), 16);
        assert_eq!(s.area, int(6));
        assert!(s.vertices.iter().any(|v| v.point == QPoint::new([rat(1, 3), rat(-7, 6)])));
        let z = star_unfolding_3cube(&int(0), &int(0)).unwrap();
        assert_eq!(z.area, int(6));
        assert_eq!(z.vertices.len(), 14);
    }
}

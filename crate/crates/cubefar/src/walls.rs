//! Delaunay triangles of the wall sections `H_{y=b}` and `H_{x=a}`, and their
//! extension to empty spheres among all 26 sites.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cube::{goal_sites, image_closed_form, DeltaPoint};
use crate::exact::{circumcenter, incircle_side, int, rat, QPoint, Rat, Side};
use crate::region::{classify_planar_left, classify_planar_right, psi1, psi2, psi1l, psi2l, psi3l, psi4l, psi5l};
use crate::Error;

/// Labels of the eight sites of `W_{y=b}`.
pub const PLANAR_LABELS: [&str; 8] = ["U", "D", "UL", "L", "LD", "UR", "R", "RD"];

/// `q_F = π_xz(p_F)` for the eight wall sites. They do not depend on b.
pub fn planar_sites(a: &Rat, c: &Rat) -> Vec<(&'static str, QPoint<2>)> {
    PLANAR_LABELS
        .iter()
        .map(|l| {
            let s = image_closed_form(l, a, c, c).expect("wall label");
            (*l, QPoint::new([s[0].clone(), s[2].clone()]))
        })
        .collect()
}

fn site<'a>(w: &'a [(&str, QPoint<2>)], l: &str) -> &'a QPoint<2> {
    &w.iter().find(|(k, _)| *k == l).expect("wall label").1
}

/// Delaunay triangles on the right of `[q_U, q_D]` for Δ1, Δ2, Δ3.
pub fn right_triangles(region: u8) -> &'static [[&'static str; 3]] {
    match region {
        1 => &[["U", "D", "R"], ["D", "R", "RD"], ["U", "UR", "R"]],
        2 => &[["U", "UR", "R"], ["U", "R", "RD"], ["U", "D", "RD"]],
        3 => &[["U", "D", "RD"], ["U", "UR", "RD"], ["UR", "R", "RD"]],
        _ => &[],
    }
}

/// Delaunay triangles on the left of `[q_U, q_D]` for Δ1L … Δ5L.
pub fn left_triangles(region: u8) -> &'static [[&'static str; 3]] {
    match region {
        1 => &[["U", "D", "L"], ["D", "L", "LD"], ["U", "UL", "L"]],
        2 => &[["U", "UL", "L"], ["U", "L", "LD"], ["U", "D", "LD"]],
        3 => &[["U", "D", "LD"], ["U", "UL", "LD"], ["UL", "L", "LD"]],
        4 => &[["UL", "L", "LD"], ["D", "UL", "LD"], ["U", "D", "UL"]],
        5 => &[["U", "D", "UL"], ["D", "UL", "L"], ["D", "L", "LD"]],
        _ => &[],
    }
}

/// First coordinate of the circumcenter of q_U, q_D, q_F (the second is 1−c).
pub fn phi_wall(f: &str, a: &Rat, c: &Rat) -> Result<Rat, Error> {
    let one = Rat::one();
    let ul = |a: &Rat| (&one + c) * (&one - a - c) / (&one + a - c);
    let l = |a: &Rat| rat(-1, 2) + (int(3) - int(2) * c) * (&one + int(2) * c) / (int(2) + int(4) * a);
    let ld = |a: &Rat| (&one - a + c) * (&one - c) / (&one + a + c);
    let m = &one - a;
    Ok(match f {
        "UL" => ul(a),
        "L" => l(a),
        "LD" => ld(a),
        "UR" => &one - ul(&m),
        "R" => &one - l(&m),
        "RD" => &one - ld(&m),
        _ => return Err(Error::Parse(format!("{f} is not a wall site"))),
    })
}

/// `φ_UL, φ_L, φ_LD ≤ 1−a ≤ φ_UR, φ_R, φ_RD`.
pub fn phi_ordering(a: &Rat, c: &Rat) -> Result<bool, Error> {
    let m = Rat::one() - a;
    for f in ["UL", "L", "LD"] {
        if phi_wall(f, a, c)? > m {
            return Ok(false);
        }
    }
    for f in ["UR", "R", "RD"] {
        if phi_wall(f, a, c)? < m {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The printed centers q(F1,F2,F3) of wall triangles, as `(x, z)`.
pub fn wall_center_closed_form(tri: [&str; 3], a: &Rat, c: &Rat) -> Option<QPoint<2>> {
    let i = |n: i64| int(n);
    let h = rat(3, 2);
    let one = Rat::one();
    let (x, z) = match tri {
        ["U", "D", "R"] => (&h - (i(3) - i(2) * c) * (i(1) + i(2) * c) / (i(2) * (i(3) - i(2) * a)), &one - c),
        ["D", "R", "RD"] => {
            let m = i(2) * (i(1) - i(2) * a + a * a + c + c * c);
            (
                &h - (i(1) - a) * (i(1) + i(2) * c) / &m,
                rat(-1, 2) + (i(1) - a) * (i(3) - i(2) * a) / m,
            )
        }
        ["U", "UR", "R"] => {
            let m = i(2) * (i(3) - i(3) * a + a * a - i(2) * c + c * c);
            (&h - (i(1) - c) * (i(3) - i(2) * c) / &m, &h - (i(1) - c) * (i(3) - i(2) * a) / m)
        }
        ["U", "R", "RD"] => {
            let m = i(2) * (i(3) - i(4) * a + a * a - c + c * c);
            let w = i(1) - a + i(2) * c;
            (&h - &w * (i(3) - i(2) * c) / &m, &h - w * (i(3) - i(2) * a) / m)
        }
        ["U", "D", "RD"] => (&one - (i(1) - c) * (a + c) / (i(2) - a + c), &one - c),
        ["U", "UR", "RD"] => {
            let m = i(4) - i(4) * a + a * a - i(2) * c + c * c;
            (i(2) - i(2) * (i(2) - a) * (i(1) - c) / &m, &one - i(2) * c * (i(1) - c) / m)
        }
        ["UR", "R", "RD"] => {
            let m = i(2) - i(3) * a + a * a - c + c * c;
            (i(2) - (i(2) - a) * (i(1) - a + c) / &m, &one - c * (i(1) - a + c) / m)
        }
        _ => return None,
    };
    Some(QPoint::new([x, z]))
}

/// Outcome of the planar wall checks at one `(a, c)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PlanarReport {
    pub triangles: usize,
    /// Triangles whose sites coincide or are collinear at this point.
    pub degenerate: usize,
    pub failures: Vec<String>,
}

impl PlanarReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every listed planar triangle (right and left charts) has an empty
/// circumcircle among the 8 wall sites; `[q_U, q_D]` is a Delaunay edge via
/// the φ ordering; on ψ boundaries the degenerate quadruple is cocircular.
pub fn check_planar(a: &Rat, c: &Rat) -> Result<PlanarReport, Error> {
    let w = planar_sites(a, c);
    let mut rep = PlanarReport::default();
    let mut tris: Vec<[&str; 3]> = Vec::new();
    for r in classify_planar_right(a, c)?.regions {
        tris.extend_from_slice(right_triangles(r));
    }
    for r in classify_planar_left(a, c)?.regions {
        tris.extend_from_slice(left_triangles(r));
    }
    tris.sort();
    tris.dedup();
    for tri in tris {
        let [p1, p2, p3] = tri.map(|l| site(&w, l).clone());
        if crate::exact::orient(&[p1.clone(), p2.clone(), p3.clone()])? == 0 {
            rep.degenerate += 1;
            continue;
        }
        rep.triangles += 1;
        for (l, q) in &w {
            if incircle_side(&p1, &p2, &p3, q)? == Side::Inside {
                rep.failures.push(format!("({a},{c}) {tri:?}: {l} inside"));
            }
        }
    }
    if !phi_ordering(a, c)? {
        rep.failures.push(format!("({a},{c}): φ ordering"));
    }
    let cocircular = [
        (psi1(a, c), ["U", "D", "R", "RD"]),
        (psi2(a, c), ["U", "RD", "R", "UR"]),
        (psi1l(a, c), ["L", "LD", "D", "U"]),
        (psi2l(a, c), ["U", "UL", "L", "LD"]),
        (psi3l(a, c), ["LD", "D", "U", "UL"]),
        (psi4l(a, c), ["UL", "L", "LD", "D"]),
        (psi5l(a, c), ["D", "U", "UL", "L"]),
    ];
    for (v, quad) in cocircular {
        if !v.is_zero() {
            continue;
        }
        let [p1, p2, p3, q] = quad.map(|l| site(&w, l).clone());
        // skip quadruples whose first three sites are collinear
        if let Ok(s) = incircle_side(&p1, &p2, &p3, &q) {
            if s != Side::On {
                rep.failures.push(format!("({a},{c}) {quad:?}: not cocircular on boundary"));
            }
        }
    }
    Ok(rep)
}

/// Which wall a spatial triangle lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Wall {
    /// `H_{y=b}`, classified by `(a, c)`.
    YB,
    /// `H_{x=a}`, classified by `(b, c)` with R→B, RD→BD, UR→UB.
    XA,
}

fn wall_label(w: Wall, l: &'static str) -> &'static str {
    match (w, l) {
        (Wall::XA, "R") => "B",
        (Wall::XA, "RD") => "BD",
        (Wall::XA, "UR") => "UB",
        _ => l,
    }
}

/// Center line point used for the empty-sphere witness: α_b or α_{b,c}.
fn alpha_is_b(tri: [&str; 3]) -> bool {
    !matches!(tri, ["U", "UR", "R"] | ["U", "UR", "RD"] | ["UR", "R", "RD"])
}

/// One spatial triangle result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpatialTriangle {
    pub wall: Wall,
    pub labels: [&'static str; 3],
    /// An empty sphere through the triangle exists (exact interval test).
    pub delaunay: bool,
    /// The α-center sphere is empty.
    pub alpha_empty: bool,
}

/// Spatial checks at one point of Δ.
pub fn check_spatial(p: &DeltaPoint) -> Result<Vec<SpatialTriangle>, Error> {
    let (a, b, c) = p.abc();
    let sites = goal_sites(p);
    let get = |l: &str| sites.iter().find(|(k, _)| *k == l).expect("site").1.clone();
    let mut out = Vec::new();
    for wall in [Wall::YB, Wall::XA] {
        // (in-plane coordinate, free coordinate, fixed value, classifier)
        let (u, k, fixed) = match wall {
            Wall::YB => (a, 1usize, b),
            Wall::XA => (b, 0usize, a),
        };
        let plane = if k == 1 { 0usize } else { 1usize };
        let mut tris: Vec<[&'static str; 3]> = Vec::new();
        for r in classify_planar_right(u, c)?.regions {
            for tri in right_triangles(r) {
                if !tris.contains(tri) {
                    tris.push(*tri);
                }
            }
        }
        for tri in tris {
            let pts = tri.map(|l| get(wall_label(wall, l)));
            let proj = |s: &QPoint<3>| QPoint::new([s[plane].clone(), s[2].clone()]);
            let q = circumcenter(&[proj(&pts[0]), proj(&pts[1]), proj(&pts[2])])?;
            let p0 = &pts[0];
            let base = (proj(p0).dist2(&q)) + fixed * fixed;
            let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
            let mut feasible = true;
            for (_, v) in &sites {
                // |v − cen|² ≥ |p0 − cen|²  ⇔  A + B·t ≥ 0 in the free coordinate t
                let av = proj(v).dist2(&q) + &v[k] * &v[k] - &base;
                let bv = int(2) * (fixed - &v[k]);
                if bv.is_zero() {
                    if av.is_negative() {
                        feasible = false;
                    }
                } else {
                    let t0 = -&av / &bv;
                    if bv.is_positive() {
                        if lo.as_ref().is_none_or(|l| t0 > *l) {
                            lo = Some(t0);
                        }
                    } else if hi.as_ref().is_none_or(|h| t0 < *h) {
                        hi = Some(t0);
                    }
                }
            }
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l > h {
                    feasible = false;
                }
            }
            let t_alpha = if alpha_is_b(tri) { Rat::one() - fixed } else { c - fixed + &q[1] };
            let mut cen = [q[0].clone(), q[0].clone(), q[1].clone()];
            cen[plane] = q[0].clone();
            cen[k] = t_alpha;
            let cen = QPoint::new(cen);
            let r2 = cen.dist2(p0);
            let alpha_empty = sites.iter().all(|(_, v)| cen.dist2(v) >= r2);
            out.push(SpatialTriangle {
                wall,
                labels: tri.map(|l| wall_label(wall, l)),
                delaunay: feasible,
                alpha_empty,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_are_circumcenters() {
        for (a, c) in [(rat(2, 5), rat(1, 6)), (rat(1, 3), rat(1, 3)), (rat(1, 2), int(0))] {
            let w = planar_sites(&a, &c);
            for f in ["UL", "L", "LD", "UR", "R", "RD"] {
                let q = circumcenter(&[site(&w, "U").clone(), site(&w, "D").clone(), site(&w, f).clone()])
                    .unwrap();
                assert_eq!(q, QPoint::new([phi_wall(f, &a, &c).unwrap(), Rat::one() - &c]), "{f}");
            }
            assert!(phi_ordering(&a, &c).unwrap());
        }
    }

    #[test]
    fn wall_closed_forms() {
        let (a, c) = (rat(2, 5), rat(1, 7));
        let w = planar_sites(&a, &c);
        let all = [1, 2, 3].into_iter().flat_map(|r| right_triangles(r).iter().copied());
        for tri in all {
            let q = circumcenter(&tri.map(|l| site(&w, l).clone())).unwrap();
            assert_eq!(wall_center_closed_form(tri, &a, &c).unwrap(), q, "{tri:?}");
        }
    }

    #[test]
    fn planar_small_grid() {
        for ai in 0..=8 {
            for ci in 0..=ai {
                let rep = check_planar(&rat(ai, 16), &rat(ci, 16)).unwrap();
                assert!(rep.ok(), "{:?}", rep.failures);
            }
        }
    }

    #[test]
    fn spatial_sample() {
        let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 6)).unwrap();
        let r = check_spatial(&p).unwrap();
        assert!(!r.is_empty());
        assert!(r.iter().all(|t| t.delaunay));
    }
}

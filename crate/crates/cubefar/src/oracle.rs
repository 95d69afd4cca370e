//! Brute-force geodesic distances by enumerating facet sequences, unfolding
//! them, and testing that the straight segment crosses every shared face.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cube::{
    dist_on_surface, dist_to_goal, facets_containing, unfold_facets, DeltaPoint, Facet, FacetLabel,
    Isometry, UnfoldSeq,
};
use crate::exact::{int, QPoint, Rat};
use crate::Error;

/// Default longest facet sequence.
pub const DEFAULT_MAX_LEN: usize = 5;

/// Simple facet paths `src = F1, …, Fl = dst` with consecutive facets
/// adjacent and no facet repeated, `l ≤ max_len`.
pub fn enumerate_paths(src: Facet, dst: Facet, n: usize, max_len: usize) -> Vec<Vec<Facet>> {
    let all = Facet::all(n);
    let mut out = Vec::new();
    let mut path = vec![src];
    fn rec(path: &mut Vec<Facet>, dst: Facet, all: &[Facet], max_len: usize, out: &mut Vec<Vec<Facet>>) {
        let last = *path.last().expect("nonempty");
        if last == dst {
            out.push(path.clone());
        }
        if path.len() == max_len {
            return;
        }
        for &g in all {
            if last.adjacent(g) && !path.contains(&g) {
                path.push(g);
                rec(path, dst, all, max_len, out);
                path.pop();
            }
        }
    }
    if max_len >= 1 && src.axis < n && dst.axis < n {
        rec(&mut path, dst, &all, max_len, &mut out);
    }
    out
}

/// [`enumerate_paths`] for labelled facets of ∂I⁴ (or ∂I³ with `n = 3`).
pub fn enumerate_sequences(src: FacetLabel, dst: FacetLabel, max_len: usize) -> Vec<UnfoldSeq> {
    enumerate_paths(src.facet(), dst.facet(), 4, max_len)
        .into_iter()
        .map(|p| UnfoldSeq(p.into_iter().map(|f| FacetLabel::from_facet(f).expect("4-cube")).collect()))
        .collect()
}

/// A precomputed unfolding from `path.last()` into `aff(path[0])`.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub path: Vec<Facet>,
    pub iso: Isometry,
    /// Images of the shared faces in aff(path[0]) as integer boxes
    /// `(lo, hi)`, ordered from the source side.
    pub windows: Vec<(Vec<i64>, Vec<i64>)>,
}

type Key = (usize, Facet, Facet, usize);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Vec<Candidate>>>> {
    static C: OnceLock<Mutex<HashMap<Key, Arc<Vec<Candidate>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Candidates unfolding the source facet `src` into the chart of `dst`.
pub fn candidates(n: usize, src: Facet, dst: Facet, max_len: usize) -> Arc<Vec<Candidate>> {
    let key = (n, src, dst, max_len);
    if let Some(v) = cache().lock().expect("cache").get(&key) {
        return v.clone();
    }
    let mut out = Vec::new();
    for path in enumerate_paths(dst, src, n, max_len) {
        let iso = unfold_facets(&path, n).expect("valid path");
        let mut windows = Vec::new();
        for k in (0..path.len() - 1).rev() {
            let prefix = unfold_facets(&path[..=k], n).expect("valid path");
            let (f, g) = (path[k], path[k + 1]);
            let mut lo = vec![0i64; n];
            let mut hi = vec![1i64; n];
            lo[f.axis] = f.side as i64;
            hi[f.axis] = f.side as i64;
            lo[g.axis] = g.side as i64;
            hi[g.axis] = g.side as i64;
            let (a, b) = (prefix.apply_i64(&lo), prefix.apply_i64(&hi));
            let l: Vec<i64> = a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect();
            let h: Vec<i64> = a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect();
            windows.push((l, h));
        }
        out.push(Candidate { path, iso, windows });
    }
    let v = Arc::new(out);
    cache().lock().expect("cache").insert(key, v.clone());
    v
}

/// Parameter interval `[t0, t1] ⊂ [0, 1]` of `s + t(e − s)` inside a box.
fn clip(s: &[Rat], e: &[Rat], lo: &[i64], hi: &[i64]) -> Option<(Rat, Rat)> {
    let mut t0 = Rat::zero();
    let mut t1 = Rat::one();
    for k in 0..s.len() {
        let d = &e[k] - &s[k];
        let (l, h) = (int(lo[k]), int(hi[k]));
        if d.is_zero() {
            if s[k] < l || s[k] > h {
                return None;
            }
            continue;
        }
        let (mut a, mut b) = ((&l - &s[k]) / &d, (&h - &s[k]) / &d);
        if d.is_negative() {
            std::mem::swap(&mut a, &mut b);
        }
        if a > t0 {
            t0 = a;
        }
        if b < t1 {
            t1 = b;
        }
        if t0 > t1 {
            return None;
        }
    }
    Some((t0, t1))
}

/// Whether the segment from `img` to `q` crosses the windows in order.
fn crosses(img: &[Rat], q: &[Rat], windows: &[(Vec<i64>, Vec<i64>)]) -> bool {
    let mut t = Rat::zero();
    for (lo, hi) in windows {
        match clip(img, q, lo, hi) {
            Some((a, b)) => {
                if a > t {
                    t = a;
                }
                if t > b {
                    return false;
                }
            }
            None => return false,
        }
    }
    true
}

/// An oracle distance with the facet sequence that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleDistance {
    pub sq: Rat,
    /// From the target facet to the source facet.
    pub path: Vec<Facet>,
}

/// Squared geodesic distance between two points of ∂Iⁿ by exhaustive
/// unfolding with sequences of at most `max_len` facets.
pub fn oracle_distance_n(p: &[Rat], q: &[Rat], max_len: usize) -> Result<OracleDistance, Error> {
    if p.len() != q.len() {
        return Err(Error::Dimension { expected: p.len(), got: q.len() });
    }
    let n = p.len();
    let fp = facets_containing(p)?;
    let fq = facets_containing(q)?;
    let mut cands: Vec<(Rat, Vec<Rat>, Arc<Vec<Candidate>>, usize)> = Vec::new();
    for &s in &fp {
        for &d in &fq {
            let cs = candidates(n, s, d, max_len);
            for (i, c) in cs.iter().enumerate() {
                let img = c.iso.apply(p);
                let sq = img.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).fold(Rat::zero(), |x, y| x + y);
                cands.push((sq, img, cs.clone(), i));
            }
        }
    }
    cands.sort_by(|a, b| a.0.cmp(&b.0));
    for (sq, img, cs, i) in cands {
        let c = &cs[i];
        if crosses(&img, q, &c.windows) {
            return Ok(OracleDistance { sq, path: c.path.clone() });
        }
    }
    Err(Error::Unsupported(format!("no admissible unfolding with max_len {max_len}; raise max_len")))
}

/// [`oracle_distance_n`] on ∂I⁴.
pub fn oracle_distance(p: &QPoint<4>, q: &QPoint<4>, max_len: usize) -> Result<OracleDistance, Error> {
    oracle_distance_n(&p.0, &q.0, max_len)
}

fn lcm_den(xs: &[&Rat]) -> Option<i64> {
    let mut l = num_bigint::BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    l.to_i64()
}

fn scaled(x: &Rat, l: i64) -> i128 {
    (x * int(l)).to_integer().to_i128().expect("scaled coordinate fits")
}

/// Argmax of the 26-image distance over the grid `1/2 ≤ x ≤ y ≤ z ≤ 1` of
/// step `1/n` on G. Returns the point and its squared distance.
pub fn oracle_farthest(p: &DeltaPoint, grid_n: i64) -> Result<(QPoint<4>, Rat), Error> {
    if grid_n < 2 || grid_n % 2 != 0 {
        return Err(Error::OutOfDomain(format!("grid 1/{grid_n} must have an even denominator")));
    }
    let (a, b, c) = p.abc();
    let step = Rat::new(1.into(), grid_n.into());
    let l = lcm_den(&[a, b, c, &step]).ok_or_else(|| Error::Unsupported("denominators too large".into()))?;
    let sites: Vec<[i128; 3]> = crate::cube::goal_sites(p)
        .iter()
        .map(|(_, s)| [scaled(&s[0], l), scaled(&s[1], l), scaled(&s[2], l)])
        .collect();
    let k = l / grid_n;
    let mut best: Option<(i128, [i64; 3])> = None;
    for ix in grid_n / 2..=grid_n {
        for iy in ix..=grid_n {
            for iz in iy..=grid_n {
                let w = [(ix * k) as i128, (iy * k) as i128, (iz * k) as i128];
                let d = sites
                    .iter()
                    .map(|s| (0..3).map(|j| (s[j] - w[j]) * (s[j] - w[j])).sum::<i128>())
                    .min()
                    .expect("26 sites");
                if best.is_none_or(|(bd, _)| d > bd) {
                    best = Some((d, [ix, iy, iz]));
                }
            }
        }
    }
    let (d, [ix, iy, iz]) = best.expect("nonempty grid");
    let g = |i: i64| Rat::new(i.into(), grid_n.into());
    let sq = Rat::new(d.into(), (l as i128 * l as i128).into());
    Ok((QPoint::new([g(ix), g(iy), g(iz), Rat::one()]), sq))
}

/// Argmax of [`dist_on_surface`] over a grid of step `1/n` on all eight
/// facets.
pub fn oracle_farthest_surface(p: &DeltaPoint, grid_n: i64) -> Result<(QPoint<4>, Rat), Error> {
    let g = |i: i64| Rat::new(i.into(), grid_n.into());
    let mut best: Option<(Rat, QPoint<4>)> = None;
    for f in FacetLabel::ALL {
        let fc = f.facet();
        for i in 0..=grid_n {
            for j in 0..=grid_n {
                for k in 0..=grid_n {
                    let mut free = [g(i), g(j), g(k)].into_iter();
                    let q = QPoint::new(std::array::from_fn(|ax| {
                        if ax == fc.axis {
                            int(fc.side as i64)
                        } else {
                            free.next().expect("three free coordinates")
                        }
                    }));
                    let d = dist_on_surface(p, &q)?;
                    if best.as_ref().is_none_or(|(bd, _)| d > *bd) {
                        best = Some((d, q));
                    }
                }
            }
        }
    }
    let (d, q) = best.expect("nonempty grid");
    Ok((q, d))
}

/// One disagreement found by [`eq11_audit`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub p: QPoint<4>,
    pub q: QPoint<4>,
    #[serde(with = "crate::exact::rat_serde")]
    pub expected: Rat,
    pub got: Option<String>,
    pub seq: Option<String>,
}

/// Report of [`eq11_audit`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eq11Report {
    pub pairs: usize,
    pub mismatches: Vec<Mismatch>,
    pub max_len: usize,
    /// Every pair gives the same value with `max_len + 1`.
    pub saturated: bool,
}

fn path_str(path: &[Facet]) -> String {
    path.iter()
        .map(|f| FacetLabel::from_facet(*f).map(|l| l.as_char()).unwrap_or('?'))
        .collect()
}

/// Compares the source-image distance with the oracle on each pair.
pub fn eq11_audit(pairs: &[(DeltaPoint, QPoint<4>)], max_len: usize) -> Result<Eq11Report, Error> {
    use rayon::prelude::*;
    let rows: Vec<(Option<Mismatch>, bool)> = pairs
        .par_iter()
        .map(|(p, q)| -> Result<(Option<Mismatch>, bool), Error> {
            let expected = if q[3] == Rat::one() {
                dist_to_goal(p, &QPoint::new([q[0].clone(), q[1].clone(), q[2].clone()]))?.0
            } else {
                dist_on_surface(p, q)?
            };
            let base = p.point();
            let got = oracle_distance(&base, q, max_len);
            let more = oracle_distance(&base, q, max_len + 1);
            let sat = match (&got, &more) {
                (Ok(x), Ok(y)) => x.sq == y.sq,
                _ => false,
            };
            let mm = match got {
                Ok(o) if o.sq == expected => None,
                Ok(o) => Some(Mismatch {
                    p: base.clone(),
                    q: q.clone(),
                    expected,
                    got: Some(o.sq.to_string()),
                    seq: Some(path_str(&o.path)),
                }),
                Err(_) => Some(Mismatch { p: base.clone(), q: q.clone(), expected, got: None, seq: None }),
            };
            Ok((mm, sat))
        })
        .collect::<Result<_, _>>()?;
    Ok(Eq11Report {
        pairs: pairs.len(),
        saturated: rows.iter().all(|r| r.1),
        mismatches: rows.into_iter().filter_map(|r| r.0).collect(),
        max_len,
    })
}

/// Oracle distance with f64 coordinates for dimensions where exact
/// enumeration is not needed. Windows are tested with tolerance `eps`.
pub fn oracle_distance_f64(p: &[f64], q: &[f64], max_len: usize, eps: f64) -> Option<f64> {
    let n = p.len();
    let on = |x: &[f64]| -> Vec<Facet> {
        (0..n)
            .flat_map(|ax| {
                let mut v = Vec::new();
                if x[ax].abs() <= eps {
                    v.push(Facet { axis: ax, side: 0 });
                }
                if (x[ax] - 1.0).abs() <= eps {
                    v.push(Facet { axis: ax, side: 1 });
                }
                v
            })
            .collect()
    };
    let mut cands: Vec<(f64, Vec<f64>, Arc<Vec<Candidate>>, usize)> = Vec::new();
    for s in on(p) {
        for d in on(q) {
            let cs = candidates(n, s, d, max_len);
            for (i, c) in cs.iter().enumerate() {
                let img = c.iso.apply_f64(p);
                let sq: f64 = img.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                cands.push((sq, img, cs.clone(), i));
            }
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    'outer: for (sq, img, cs, i) in cands {
        let mut t = 0.0f64;
        for (lo, hi) in &cs[i].windows {
            let (mut t0, mut t1) = (0.0f64, 1.0f64);
            for k in 0..n {
                let d = q[k] - img[k];
                let (l, h) = (lo[k] as f64, hi[k] as f64);
                if d.abs() < 1e-15 {
                    if img[k] < l - eps || img[k] > h + eps {
                        continue 'outer;
                    }
                    continue;
                }
                let (mut a, mut b) = ((l - eps - img[k]) / d, (h + eps - img[k]) / d);
                if d < 0.0 {
                    std::mem::swap(&mut a, &mut b);
                }
                t0 = t0.max(a);
                t1 = t1.min(b);
            }
            t = t.max(t0);
            if t > t1 + eps {
                continue 'outer;
            }
        }
        return Some(sq);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q4(s: &str) -> QPoint<4> {
        s.parse().unwrap()
    }

    #[test]
    fn sequences() {
        use FacetLabel::*;
        assert!(enumerate_sequences(S, G, 1).is_empty());
        let v = enumerate_sequences(S, G, 3);
        assert_eq!(v.len(), 6);
        assert!(v.iter().all(|s| s.0.len() == 3));
        assert_eq!(enumerate_sequences(S, S, 1), vec![UnfoldSeq(vec![S])]);
    }

    #[test]
    fn distance_examples() {
        let d = oracle_distance(&q4("2/5,1/3,1/6,0"), &q4("1,1,1,1"), 5).unwrap();
        assert_eq!(d.sq, rat(3329, 900));
        let p = q4("1/5,0,1/3,1/2");
        assert_eq!(oracle_distance(&p, &p, 5).unwrap().sq, int(0));
        let d = oracle_distance(&q4("1/2,1/2,1/2,0"), &q4("1/2,1/2,1/2,1"), 5).unwrap();
        assert_eq!(d.sq, int(4));
        assert!(oracle_distance(&q4("1/2,1/2,1/2,1/2"), &p, 5).is_err());
    }

    #[test]
    fn three_cube_corner() {
        let d = oracle_distance_n(&[int(0), int(0), int(0)], &[int(1), int(1), int(1)], 4).unwrap();
        assert_eq!(d.sq, int(5));
    }

    #[test]
    fn float_matches_exact() {
        let d = oracle_distance_f64(&[0.4, 1.0 / 3.0, 1.0 / 6.0, 0.0], &[1.0, 1.0, 1.0, 1.0], 5, 1e-12).unwrap();
        assert!((d - 3329.0 / 900.0).abs() < 1e-9);
    }

    #[test]
    fn farthest_grid() {
        let p = DeltaPoint::new(int(0), int(0), int(0)).unwrap();
        let (q, d) = oracle_farthest(&p, 8).unwrap();
        assert_eq!(q, q4("1,1,1,1"));
        assert_eq!(d, int(6));
    }

    #[test]
    fn audit_small() {
        let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 6)).unwrap();
        let pairs = vec![(p.clone(), q4("1,1,1,1")), (p.clone(), q4("1/2,1,1/4,1")), (p, q4("1,1/2,1/4,3/8"))];
        let r = eq11_audit(&pairs, 5).unwrap();
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        assert!(r.saturated);
    }
}

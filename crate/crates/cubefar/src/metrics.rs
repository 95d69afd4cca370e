//! Intrinsic radius and diameter of ∂Iⁿ: exact for n ≤ 4, sampled beyond.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{surface_dist2, surface_dist2_3cube, DeltaPoint};
use crate::dynamics::delta_grid;
use crate::exact::{fmt_rat, int, rat, to_f64, QPoint, Rat};
use crate::farthest::{farthest_3cube, farthest_fundamental};
use crate::oracle::oracle_distance_f64;
use crate::Error;

/// A pair realizing a radius or diameter value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub p: Vec<String>,
    pub q: Vec<String>,
    /// Squared distance, exact (`num/den`) or decimal for estimates.
    pub sq: String,
}

/// Grid certificate for the radius: the minimum of `d(p, f(p))²` over a
/// grid of the fundamental domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(with = "crate::exact::rat_serde")]
    pub step: Rat,
    pub points: usize,
    #[serde(with = "crate::exact::rat_serde")]
    pub min_sq: Rat,
    pub argmin: Vec<String>,
    #[serde(with = "crate::exact::rat_serde")]
    pub max_sq: Rat,
    /// Lower bound on the radius from the grid minimum minus the grid
    /// diagonal, using that `p ↦ d(p, f(p))` is 1-Lipschitz.
    pub radius_lower: f64,
}

/// Radius and diameter of ∂Iⁿ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusReport {
    pub n: usize,
    /// `"EXACT"` or `"ESTIMATE"`.
    pub kind: &'static str,
    #[serde(serialize_with = "ser_opt_rat")]
    pub radius_sq: Option<Rat>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub diameter_sq: Option<Rat>,
    pub radius: f64,
    pub diameter: f64,
    pub ratio: f64,
    pub witnesses: Vec<Witness>,
    pub certificate: Option<Certificate>,
    /// `2/√(n+2)`.
    pub formula_facet: f64,
    /// `(√(n+7)/2)/√(n+2)`.
    pub formula_corner: f64,
    pub max_len: Option<usize>,
    /// Number of oracle queries with no admissible unfolding (estimates only).
    pub unresolved: usize,
}

fn ser_opt_rat<S: serde::Serializer>(x: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_some(&fmt_rat(r)),
        None => s.serialize_none(),
    }
}

fn strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

/// `2/√(n+2)`.
pub fn ratio_formula(n: usize) -> f64 {
    2.0 / ((n + 2) as f64).sqrt()
}

/// `(√(n+7)/2)/√(n+2)`, the ratio if the corner were the farthest point
/// of the facet center.
pub fn ratio_formula_corner(n: usize) -> f64 {
    ((n + 7) as f64).sqrt() / 2.0 / ((n + 2) as f64).sqrt()
}

/// Squared intrinsic distance on the boundary of the unit square.
pub fn square_dist2(p: &[Rat; 2], q: &[Rat; 2]) -> Result<Rat, Error> {
    let param = |x: &[Rat; 2]| -> Result<Rat, Error> {
        let (zero, one) = (Rat::zero(), Rat::one());
        if x.iter().any(|t| *t < zero || *t > one) {
            return Err(Error::NotOnBoundary(format!("{},{}", x[0], x[1])));
        }
        Ok(if x[1] == zero {
            x[0].clone()
        } else if x[0] == one {
            &one + &x[1]
        } else if x[1] == one {
            int(3) - &x[0]
        } else if x[0] == zero {
            int(4) - &x[1]
        } else {
            return Err(Error::NotOnBoundary(format!("{},{}", x[0], x[1])));
        })
    };
    let d = (param(p)? - param(q)?).abs();
    let d = if d > int(2) { int(4) - d } else { d };
    Ok(&d * &d)
}

fn grid_steps(step: &Rat, hi: &Rat) -> Vec<Rat> {
    let mut out = Vec::new();
    let mut t = Rat::zero();
    while t <= *hi {
        out.push(t.clone());
        t += step;
    }
    out
}

/// `d(p, f(p))²` over a grid of the fundamental domain: `(a, b, c)` in Δ
/// for `n = 4`, `(a, b)` with `0 ≤ b ≤ a ≤ 1/2` for `n = 3`, and the
/// parameter `a ∈ [0, 1/2]` on the bottom edge for `n = 2`.
pub fn farthest_distance_field(n: usize, step: &Rat) -> Result<Vec<(Vec<Rat>, Rat)>, Error> {
    if !step.is_positive() {
        return Err(Error::OutOfDomain(format!("grid step {step}")));
    }
    let half = rat(1, 2);
    match n {
        4 => delta_grid(step, true)
            .into_par_iter()
            .map(|p| {
                let (a, b, c) = p.abc();
                let v = vec![a.clone(), b.clone(), c.clone()];
                farthest_fundamental(&p).map(|f| (v, f.sq_dist))
            })
            .collect(),
        3 => {
            let mut out = Vec::new();
            for a in grid_steps(step, &half) {
                for b in grid_steps(step, &a) {
                    let f = farthest_3cube(&a, &b)?;
                    out.push((vec![a.clone(), b], f.sq_dist));
                }
            }
            Ok(out)
        }
        2 => grid_steps(step, &half)
            .into_iter()
            .map(|a| {
                let q = [Rat::one() - &a, Rat::one()];
                square_dist2(&[a.clone(), Rat::zero()], &q).map(|d| (vec![a], d))
            })
            .collect(),
        _ => Err(Error::Unsupported(format!("exact farthest field for n = {n}"))),
    }
}

/// Exact radius and diameter for `n ∈ {2, 3, 4}`, with the facet-center
/// and opposite-corner witnesses and a grid certificate of step `step`.
pub fn radius_diameter_exact(n: usize, step: &Rat) -> Result<RadiusReport, Error> {
    let h = rat(1, 2);
    let (z, o) = (Rat::zero(), Rat::one());
    let (rp, rq, rsq, dp, dq, dsq): (Vec<Rat>, Vec<Rat>, Rat, Vec<Rat>, Vec<Rat>, Rat) = match n {
        4 => {
            let rp = QPoint::new([h.clone(), h.clone(), h.clone(), z.clone()]);
            let rq = QPoint::new([h.clone(), h.clone(), h.clone(), o.clone()]);
            let dp = QPoint::from_ints([0, 0, 0, 0]);
            let dq = QPoint::from_ints([1, 1, 1, 1]);
            let (r, d) = (surface_dist2(&rp, &rq)?, surface_dist2(&dp, &dq)?);
            (rp.0.to_vec(), rq.0.to_vec(), r, dp.0.to_vec(), dq.0.to_vec(), d)
        }
        3 => {
            let rp = QPoint::new([h.clone(), h.clone(), z.clone()]);
            let rq = QPoint::new([h.clone(), h.clone(), o.clone()]);
            let dp = QPoint::from_ints([0, 0, 0]);
            let dq = QPoint::from_ints([1, 1, 1]);
            let (r, d) = (surface_dist2_3cube(&rp, &rq)?, surface_dist2_3cube(&dp, &dq)?);
            (rp.0.to_vec(), rq.0.to_vec(), r, dp.0.to_vec(), dq.0.to_vec(), d)
        }
        2 => {
            let (rp, rq) = ([h.clone(), z.clone()], [h.clone(), o.clone()]);
            let (dp, dq) = ([z.clone(), z.clone()], [o.clone(), o.clone()]);
            let (r, d) = (square_dist2(&rp, &rq)?, square_dist2(&dp, &dq)?);
            (rp.to_vec(), rq.to_vec(), r, dp.to_vec(), dq.to_vec(), d)
        }
        _ => return Err(Error::Unsupported(format!("exact radius for n = {n}; use the estimator"))),
    };
    let field = farthest_distance_field(n, step)?;
    let (argmin, min_sq) = field.iter().min_by(|a, b| a.1.cmp(&b.1)).cloned().expect("nonempty grid");
    let max_sq = field.iter().map(|r| r.1.clone()).max().expect("nonempty grid");
    let diag = to_f64(step) * ((n - 1) as f64).sqrt();
    let certificate = Certificate {
        step: step.clone(),
        points: field.len(),
        min_sq: min_sq.clone(),
        argmin: strs(&argmin),
        max_sq,
        radius_lower: to_f64(&min_sq).sqrt() - diag,
    };
    let (radius, diameter) = (to_f64(&rsq).sqrt(), to_f64(&dsq).sqrt());
    Ok(RadiusReport {
        n,
        kind: "EXACT",
        witnesses: vec![
            Witness { p: strs(&rp), q: strs(&rq), sq: fmt_rat(&rsq) },
            Witness { p: strs(&dp), q: strs(&dq), sq: fmt_rat(&dsq) },
        ],
        ratio: (to_f64(&rsq) / to_f64(&dsq)).sqrt(),
        radius_sq: Some(rsq),
        diameter_sq: Some(dsq),
        radius,
        diameter,
        certificate: Some(certificate),
        formula_facet: ratio_formula(n),
        formula_corner: ratio_formula_corner(n),
        max_len: None,
        unresolved: 0,
    })
}

/// Default sequence length of the estimator.
pub fn default_max_len(n: usize) -> usize {
    if n <= 4 {
        n + 1
    } else {
        4
    }
}

/// Squared geodesic distance on ∂Iⁿ in floating point.
pub fn dist2_f64(p: &[f64], q: &[f64], max_len: usize) -> Option<f64> {
    oracle_distance_f64(p, q, max_len, 1e-12)
}

fn farthest_estimate(p: &[f64], max_len: usize, extra: &[Vec<f64>], unresolved: &mut usize) -> (f64, Vec<f64>) {
    let n = p.len();
    let mut eval = |q: &[f64]| -> f64 {
        dist2_f64(p, q, max_len).unwrap_or_else(|| {
            *unresolved += 1;
            f64::NEG_INFINITY
        })
    };
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let anti: Vec<f64> = p.iter().map(|x| 1.0 - x).collect();
    let corner: Vec<f64> = anti.iter().map(|x| if *x >= 0.5 { 1.0 } else { 0.0 }).collect();
    let mut starts = vec![anti.clone(), corner.clone()];
    for k in 0..n {
        let mut c = corner.clone();
        c[k] = 1.0 - c[k];
        starts.push(c);
    }
    starts.extend(extra.iter().cloned());
    for q in starts {
        let d = eval(&q);
        if d > best.0 {
            best = (d, q);
        }
    }
    // pattern search inside the facet of the current best point
    let fixed: Vec<bool> = best.1.iter().map(|x| *x == 0.0 || *x == 1.0).collect();
    let axis = (0..n).rev().find(|&k| fixed[k]);
    let mut h = 0.25;
    while h >= 1.0 / 512.0 {
        let mut improved = true;
        while improved {
            improved = false;
            for k in 0..n {
                if Some(k) == axis {
                    continue;
                }
                for s in [-h, h] {
                    let mut q = best.1.clone();
                    q[k] = (q[k] + s).clamp(0.0, 1.0);
                    let d = eval(&q);
                    if d > best.0 + 1e-15 {
                        best = (d, q);
                        improved = true;
                    }
                }
            }
        }
        h /= 2.0;
    }
    best
}

/// Sampling estimate of radius and diameter of ∂Iⁿ, `n ≥ 2`.
///
/// Sources are the facet center, a corner, and `samples` random points of
/// the facet `x_n = 0`; each source's farthest distance is estimated from
/// structured candidates followed by a pattern search. Values are labelled
/// `ESTIMATE`.
pub fn estimate_ratio_sampling(n: usize, samples: usize, seed: u64, max_len: Option<usize>) -> Result<RadiusReport, Error> {
    if n < 2 {
        return Err(Error::Unsupported(format!("n = {n}")));
    }
    let max_len = max_len.unwrap_or_else(|| default_max_len(n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut center = vec![0.5; n];
    center[n - 1] = 0.0;
    let mut sources = vec![center, vec![0.0; n]];
    for _ in 0..samples {
        let mut p: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        p[n - 1] = 0.0;
        sources.push(p);
    }
    let mut opp = vec![0.5; n];
    opp[n - 1] = 1.0;
    let extra = vec![opp];
    let rows: Vec<(Vec<f64>, f64, Vec<f64>, usize)> = sources
        .into_par_iter()
        .map(|p| {
            let mut u = 0;
            let (d, q) = farthest_estimate(&p, max_len, &extra, &mut u);
            (p, d, q, u)
        })
        .collect();
    let unresolved = rows.iter().map(|r| r.3).sum();
    let rmin = rows.iter().min_by(|a, b| a.1.total_cmp(&b.1)).expect("sources");
    let dmax = rows.iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("sources");
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>();
    let (radius, diameter) = (rmin.1.sqrt(), dmax.1.sqrt());
    Ok(RadiusReport {
        n,
        kind: "ESTIMATE",
        radius_sq: None,
        diameter_sq: None,
        radius,
        diameter,
        ratio: radius / diameter,
        witnesses: vec![
            Witness { p: fmt(&rmin.0), q: fmt(&rmin.2), sq: format!("{:.9}", rmin.1) },
            Witness { p: fmt(&dmax.0), q: fmt(&dmax.2), sq: format!("{:.9}", dmax.1) },
        ],
        certificate: None,
        formula_facet: ratio_formula(n),
        formula_corner: ratio_formula_corner(n),
        max_len: Some(max_len),
        unresolved,
    })
}

/// Squared distance from the center of `x_n = 0` to the corner `(1,…,1)`
/// and to the opposite facet center, in floating point.
pub fn center_probe(n: usize, max_len: Option<usize>) -> Option<(f64, f64)> {
    let max_len = max_len.unwrap_or_else(|| default_max_len(n));
    let mut p = vec![0.5; n];
    p[n - 1] = 0.0;
    let mut q1 = vec![0.5; n];
    q1[n - 1] = 1.0;
    Some((dist2_f64(&p, &vec![1.0; n], max_len)?, dist2_f64(&p, &q1, max_len)?))
}

/// The facet center of Δ.
pub fn facet_center() -> DeltaPoint {
    let h = rat(1, 2);
    DeltaPoint::new(h.clone(), h.clone(), h).expect("in Δ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_values() {
        for (n, r, d) in [(2, 4, 4), (3, 4, 5), (4, 4, 6)] {
            let rep = radius_diameter_exact(n, &rat(1, 8)).unwrap();
            assert_eq!(rep.radius_sq, Some(int(r)));
            assert_eq!(rep.diameter_sq, Some(int(d)));
            assert!((rep.ratio - ratio_formula(n)).abs() < 1e-15);
            let c = rep.certificate.unwrap();
            assert!(c.min_sq >= int(4), "{n} {:?} {}", c.argmin, c.min_sq);
            assert!(c.max_sq <= int(d));
        }
        assert!(radius_diameter_exact(5, &rat(1, 8)).is_err());
    }

    #[test]
    fn fields() {
        let f = farthest_distance_field(3, &rat(1, 8)).unwrap();
        assert_eq!(f[0], (vec![int(0), int(0)], int(5)));
        let f = farthest_distance_field(4, &rat(1, 4)).unwrap();
        let m = f.iter().min_by(|a, b| a.1.cmp(&b.1)).unwrap();
        assert_eq!(m.0, vec![rat(1, 2); 3]);
        assert_eq!(m.1, int(4));
    }

    #[test]
    fn n10_corner_is_farther() {
        let (corner, opposite) = center_probe(10, None).unwrap();
        assert!((corner - 17.0 / 4.0).abs() < 1e-12);
        assert!((opposite - 4.0).abs() < 1e-12);
    }

    #[test]
    fn estimate_n4() {
        let r = estimate_ratio_sampling(4, 40, 7, None).unwrap();
        assert_eq!(r.kind, "ESTIMATE");
        assert!((r.ratio - ratio_formula(4)).abs() < 1e-2, "{}", r.ratio);
        assert!(r.ratio >= 0.5 && r.ratio <= 1.0);
    }
}

//! Orbits of ι∘f, blow-up coordinates and the descent inequalities.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::corners::{closed_form_center, SiteTriple};
use crate::cube::{reduce_generic, DeltaPoint};
use crate::exact::{int, rat, snap_dyadic, to_f64, QPoint, Rat};
use crate::farthest::{farthest, farthest_3cube, iota};
use crate::region::{classify_delta, RegionTag};
use crate::Error;

/// Orbit iteration settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitOptions {
    pub max_steps: usize,
    pub exact_steps: usize,
    pub tol: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { max_steps: 500, exact_steps: 8, tol: 1e-12 }
    }
}

/// One iterate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStep {
    pub point: QPoint<4>,
    /// Region of the Δ-reduced point.
    pub region: RegionTag,
    /// Whether the step was taken from an exact (unsnapped) point.
    pub exact: bool,
}

/// An orbit `q_0 = p`, `q_{j+1} = ι(f(q_j))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Orbit {
    /// `q_0, q_1, …`; iterates after the exact prefix come from snapped points.
    pub iterates: Vec<OrbitStep>,
    /// Number of steps computed from exact iterates.
    pub exact_prefix_len: usize,
    /// Last iterate when the orbit settled within tolerance.
    pub limit: Option<QPoint<4>>,
    /// Max-norm distance of the limit's Δ-reduction from the diagonal.
    pub diagonal_deviation: Option<f64>,
}

impl Orbit {
    /// Number of recorded steps.
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

fn reduced_key(q: &QPoint<4>) -> Result<(Vec<Rat>, QPoint<4>), Error> {
    let d = DeltaPoint::reduce(q)?;
    Ok((vec![d.a, d.b, d.c], q.clone()))
}

/// `ι` of the selected farthest point of `q`: the one whose ι-image has the
/// least Δ-reduced coordinates (ties broken by the point itself).
pub fn step(q: &QPoint<4>) -> Result<QPoint<4>, Error> {
    let f = farthest(q)?;
    let mut best: Option<(Vec<Rat>, QPoint<4>)> = None;
    for fp in f.points {
        let k = reduced_key(&iota(&fp.point))?;
        if best.as_ref().is_none_or(|b| k < *b) {
            best = Some(k);
        }
    }
    Ok(best.expect("nonempty farthest set").1)
}

/// Distance in max-norm of the Δ-reduction of `q` from `{(t,t,t,0)}`.
pub fn diagonal_deviation(q: &QPoint<4>) -> Result<f64, Error> {
    let d = DeltaPoint::reduce(q)?;
    Ok((to_f64(&d.a) - to_f64(&d.c)) / 2.0)
}

fn snap(q: &QPoint<4>) -> QPoint<4> {
    QPoint::new(std::array::from_fn(|k| snap_dyadic(to_f64(&q[k]), 48)))
}

/// Iterates ι∘f from `p`. The first `exact_steps` steps are exact; later
/// steps start from the iterate snapped to a multiple of 2⁻⁴⁸. Stops when a
/// step moves less than `tol` in max-norm (that step is not recorded).
pub fn iterate_orbit(p: &QPoint<4>, opts: &OrbitOptions) -> Result<Orbit, Error> {
    if opts.exact_steps > opts.max_steps {
        return Err(Error::OutOfDomain("exact_steps exceeds max_steps".into()));
    }
    let region = |q: &QPoint<4>| -> Result<RegionTag, Error> { Ok(classify_delta(&DeltaPoint::reduce(q)?)?.tag) };
    let mut iterates = vec![OrbitStep { point: p.clone(), region: region(p)?, exact: true }];
    let mut limit = None;
    let mut cur = p.clone();
    for j in 0..opts.max_steps {
        let exact = j < opts.exact_steps;
        let from = if exact { cur.clone() } else { snap(&cur) };
        let next = step(&from)?;
        if next.max_norm_f64(&cur) < opts.tol {
            limit = Some(cur.clone());
            break;
        }
        iterates.push(OrbitStep { point: next.clone(), region: region(&next)?, exact });
        cur = next;
    }
    let diagonal_deviation = match &limit {
        Some(l) => Some(diagonal_deviation(l)?),
        None => None,
    };
    let exact_prefix_len = iterates.iter().skip(1).filter(|s| s.exact).count();
    Ok(Orbit { iterates, exact_prefix_len, limit, diagonal_deviation })
}

/// One step of ι∘f on ∂I³ in fundamental coordinates: the least reduced
/// image among the farthest points.
pub fn step_3cube(a: &Rat, b: &Rat) -> Result<(Rat, Rat), Error> {
    let f = farthest_3cube(a, b)?;
    let mut best: Option<Vec<Rat>> = None;
    for q in &f.points {
        let (y, _) = reduce_generic(&iota(q).0)?;
        if best.as_ref().is_none_or(|b| y < *b) {
            best = Some(y);
        }
    }
    let y = best.ok_or_else(|| Error::Inconsistent("empty farthest set".into()))?;
    Ok((y[0].clone(), y[1].clone()))
}

/// Orbit of ι∘f on ∂I³ from `(a, b, 0)`, `0 ≤ b ≤ a ≤ 1/2`, in fundamental
/// coordinates: `exact_steps` exact steps, then each step from the point
/// snapped to a multiple of 2⁻⁴⁸. Returns the visited points and whether
/// the orbit settled (max-norm change below `tol`).
pub fn orbit_3cube(a: &Rat, b: &Rat, max_steps: usize, exact_steps: usize, tol: f64) -> Result<(Vec<[f64; 2]>, bool), Error> {
    let mut cur = (a.clone(), b.clone());
    let mut out = vec![[to_f64(a), to_f64(b)]];
    for j in 0..max_steps {
        let from = if j < exact_steps {
            cur.clone()
        } else {
            (snap_dyadic(to_f64(&cur.0), 48), snap_dyadic(to_f64(&cur.1), 48))
        };
        let next = step_3cube(&from.0, &from.1)?;
        let d = (to_f64(&next.0) - to_f64(&cur.0)).abs().max((to_f64(&next.1) - to_f64(&cur.1)).abs());
        if d < tol {
            return Ok((out, true));
        }
        out.push([to_f64(&next.0), to_f64(&next.1)]);
        cur = next;
    }
    Ok((out, false))
}

/// A ratio that may be infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Ratio {
    Finite(#[serde(with = "crate::exact::rat_serde")] Rat),
    Infinite,
}

impl Ratio {
    fn of(n: Rat, d: &Rat) -> Ratio {
        if d.is_zero() {
            Ratio::Infinite
        } else {
            Ratio::Finite(n / d)
        }
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Ratio::Finite(r) => Some(r),
            Ratio::Infinite => None,
        }
    }
}

/// Blow-up coordinates `r_xz = a/c`, `r_2 = (a−c)/c²`, `r_yz = b/c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blowup {
    pub r_xz: Ratio,
    pub r_2: Ratio,
    pub r_yz: Ratio,
}

pub fn blowup_coords(p: &DeltaPoint) -> Blowup {
    let (a, b, c) = p.abc();
    Blowup {
        r_xz: Ratio::of(a.clone(), c),
        r_2: Ratio::of(a - c, &(c * c)),
        r_yz: Ratio::of(b.clone(), c),
    }
}

/// One evaluated descent inequality; `margin < 0` means it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentCheck {
    pub name: &'static str,
    pub holds: bool,
    #[serde(with = "crate::exact::rat_serde")]
    pub margin: Rat,
}

/// Result of [`check_descent`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub region: RegionTag,
    /// `None` when p is outside every hypothesis window.
    pub window: Option<&'static str>,
    pub checks: Vec<DescentCheck>,
}

impl DescentReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Upper bound on `a` for the small-|p| hypothesis.
pub fn small_window() -> Rat {
    rat(1, 10)
}

fn iota_center(t: SiteTriple, p: &DeltaPoint) -> Result<QPoint<3>, Error> {
    Ok(iota(&closed_form_center(t, p)?.0))
}

fn check(name: &'static str, margin: Rat) -> DescentCheck {
    DescentCheck { name, holds: margin.is_negative(), margin }
}

/// Evaluates the descent inequalities that apply to p: for Δ21/Δ22 with
/// r_xz > 3, `r_xz(ιq) − r_xz + 1 < 0`; for Δ21/Δ22 with r_xz < 3.535,
/// `r_xz(ιq) < r_xz`, `r_2 > 6` and `r_2(ιq) − r_2 + 4 < 0`; for Δ31/Δ32A,
/// `r_xz > 4` and the closed form of `r_xz(ιq) − r_xz + 1`; for Δ33,
/// `r_yz(ιq) − r_yz + 1 < 0` for both candidates.
pub fn check_descent(p: &DeltaPoint) -> Result<DescentReport, Error> {
    let region = classify_delta(p)?;
    let (a, b, c) = p.abc();
    let mut rep = DescentReport { region: region.tag, window: None, checks: Vec::new() };
    if !region.is_interior() || c.is_zero() || *a > small_window() {
        return Ok(rep);
    }
    let rxz = a / c;
    let r2 = (a - c) / (c * c);
    let ryz = b / c;
    let sel = |q: &QPoint<3>, k: usize| &q[k] / &q[2];
    use RegionTag::*;
    match region.tag {
        D21 | D22A | D22B => {
            rep.window = Some("D21/D22");
            let q = iota_center(SiteTriple(["B", "RD", "R"]), p)?;
            let rq = sel(&q, 0);
            if rxz > int(3) {
                rep.checks.push(check("r_xz drops by more than 1", &rq - &rxz + int(1)));
            }
            if rxz < rat(3535, 1000) {
                let r2q = (&q[0] - &q[2]) / (&q[2] * &q[2]);
                rep.checks.push(check("r_xz decreases", &rq - &rxz));
                rep.checks.push(check("r_2 > 6", int(6) - &r2));
                rep.checks.push(check("r_2 drops by more than 4", r2q - &r2 + int(4)));
            }
        }
        D31 | D32A => {
            rep.window = Some("D31/D32A");
            let q = iota_center(SiteTriple(["B", "RD", "UR"]), p)?;
            let lhs = sel(&q, 0) - &rxz + int(1);
            let rhs = -(a - int(3) * c) * (a - c) / (int(2) * c * (int(1) - c));
            rep.checks.push(check("r_xz > 4", int(4) - &rxz));
            rep.checks.push(DescentCheck {
                name: "identity r_xz(ιq) − r_xz + 1 = −(a−3c)(a−c)/2c(1−c)",
                holds: lhs == rhs,
                margin: &lhs - &rhs,
            });
            rep.checks.push(check("r_xz drops by more than 1", lhs));
        }
        D33 => {
            rep.window = Some("D33");
            for t in [SiteTriple(["BD", "RD", "UR"]), SiteTriple(["UB", "BD", "UR"])] {
                let q = iota_center(t, p)?;
                rep.checks.push(check("r_yz drops by more than 1", sel(&q, 1) - &ryz + int(1)));
            }
        }
        _ => {}
    }
    Ok(rep)
}

/// Limit of one sample in [`limit_set_summary`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitSample {
    pub start: QPoint<4>,
    pub resolved: bool,
    pub steps: usize,
    /// `c′` of the reduced limit.
    pub c_limit: Option<f64>,
    pub deviation: Option<f64>,
    pub same_facet: bool,
}

/// Aggregate over a grid of starts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitSummary {
    pub samples: Vec<LimitSample>,
    pub max_deviation: f64,
    pub unresolved: usize,
    /// Starts with c > 0 whose c′ fell below the floor.
    pub below_floor: usize,
}

/// Orbits from every `(a,b,c,0) ∈ Δ` on the grid of step `step` with `c > 0`.
pub fn limit_set_summary(step: &Rat, opts: &OrbitOptions, floor: f64) -> Result<LimitSummary, Error> {
    use rayon::prelude::*;
    let starts = delta_grid(step, false);
    let samples: Vec<LimitSample> = starts
        .par_iter()
        .map(|p| limit_sample(&p.point(), opts))
        .collect::<Result<_, _>>()?;
    let max_deviation = samples.iter().filter_map(|s| s.deviation).fold(0.0, f64::max);
    let unresolved = samples.iter().filter(|s| !s.resolved).count();
    let below_floor = samples.iter().filter(|s| s.c_limit.is_some_and(|c| c < floor)).count();
    Ok(LimitSummary { samples, max_deviation, unresolved, below_floor })
}

/// Orbit of one start reduced to a [`LimitSample`].
pub fn limit_sample(p: &QPoint<4>, opts: &OrbitOptions) -> Result<LimitSample, Error> {
    let o = iterate_orbit(p, opts)?;
    let (c_limit, same_facet) = match &o.limit {
        Some(l) => {
            let d = DeltaPoint::reduce(l)?;
            let f0 = crate::cube::facet_of(p)?;
            let f1 = crate::cube::facet_of(l)?;
            (Some(to_f64(&d.c)), f0.iter().any(|f| f1.contains(f)))
        }
        None => (None, false),
    };
    Ok(LimitSample {
        start: p.clone(),
        resolved: o.limit.is_some(),
        steps: o.steps(),
        c_limit,
        deviation: o.diagonal_deviation,
        same_facet,
    })
}

/// Grid points of Δ with the given step; `include_c0` keeps `c = 0`.
pub fn delta_grid(step: &Rat, include_c0: bool) -> Vec<DeltaPoint> {
    let half = rat(1, 2);
    let mut out = Vec::new();
    let mut a = Rat::zero();
    while a <= half {
        let mut b = Rat::zero();
        while b <= a {
            let mut c = if include_c0 { Rat::zero() } else { step.clone() };
            while c <= b {
                out.push(DeltaPoint::new(a.clone(), b.clone(), c.clone()).expect("grid in Δ"));
                c += step;
            }
            b += step;
        }
        a += step;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q4(s: &str) -> QPoint<4> {
        s.parse().unwrap()
    }

    #[test]
    fn first_step() {
        let q = step(&q4("2/5,1/3,1/4,0")).unwrap();
        assert_eq!(q, q4("31/88,17/56,1/4,0"));
    }

    #[test]
    fn delta11_limit() {
        let o = iterate_orbit(&q4("2/5,1/3,1/4,0"), &OrbitOptions::default()).unwrap();
        let l = o.limit.unwrap();
        for k in 0..3 {
            assert!((to_f64(&l[k]) - 0.25).abs() < 1e-9);
        }
        assert_eq!(o.exact_prefix_len, 8);
    }

    #[test]
    fn diagonal_is_fixed() {
        let o = iterate_orbit(&q4("1/3,1/3,1/3,0"), &OrbitOptions::default()).unwrap();
        assert_eq!(o.steps(), 0);
        assert_eq!(o.limit, Some(q4("1/3,1/3,1/3,0")));
    }

    #[test]
    fn c_zero_start() {
        let o = iterate_orbit(&q4("2/5,1/3,0,0"), &OrbitOptions::default()).unwrap();
        assert!(o.limit.is_some());
        assert!(o.diagonal_deviation.unwrap() < 1e-9);
    }

    #[test]
    fn blowup_examples() {
        let b = blowup_coords(&DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 6)).unwrap());
        assert_eq!(b.r_xz, Ratio::Finite(rat(12, 5)));
        let t = rat(1, 5);
        let d = blowup_coords(&DeltaPoint::new(t.clone(), t.clone(), t).unwrap());
        assert_eq!((d.r_xz, d.r_2, d.r_yz), (Ratio::Finite(int(1)), Ratio::Finite(int(0)), Ratio::Finite(int(1))));
        let z = blowup_coords(&DeltaPoint::new(rat(2, 5), rat(1, 3), int(0)).unwrap());
        assert_eq!(z.r_xz, Ratio::Infinite);
    }

    #[test]
    fn descent_windows() {
        let t = rat(1, 20);
        let d = check_descent(&DeltaPoint::new(t.clone(), t.clone(), t).unwrap()).unwrap();
        assert!(d.window.is_none());
        // a point of Δ31 with small |p|
        let p = DeltaPoint::new(rat(1, 10), rat(1, 100), rat(1, 200)).unwrap();
        let r = check_descent(&p).unwrap();
        assert!(r.window.is_some(), "{:?}", r.region);
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn three_cube_orbit() {
        for (a, b) in [(rat(3, 8), rat(1, 8)), (rat(1, 4), int(0)), (rat(7, 16), rat(1, 16))] {
            let (trace, ok) = orbit_3cube(&a, &b, 100, 8, 1e-13).unwrap();
            assert!(ok);
            let l = trace.last().unwrap();
            assert!((l[0] - to_f64(&b)).abs() < 1e-9 && (l[1] - to_f64(&b)).abs() < 1e-9, "{l:?}");
        }
    }
}

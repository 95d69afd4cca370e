//! Pass/fail audits aggregating the checks of every module.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corners::{corner_set, dominance_check, verify_corner};
use crate::cube::{DeltaPoint, FacetLabel};
use crate::dynamics::{check_descent, delta_grid, limit_set_summary, orbit_3cube, OrbitOptions};
use crate::exact::{fmt_rat, int, rat, to_f64, QPoint, Rat};
use crate::farthest::{agrees_with_theorem, farthest_fundamental};
use crate::metrics::{radius_diameter_exact, ratio_formula};
use crate::oracle::{eq11_audit, oracle_farthest};
use crate::region::{classify_delta, RegionTag};
use crate::walls::{check_planar, check_spatial};
use crate::Error;

/// Audit suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Eq11,
    Walls,
    Corners,
    Theorem7,
    Dynamics,
    Metrics,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Eq11, Suite::Walls, Suite::Corners, Suite::Theorem7, Suite::Dynamics, Suite::Metrics];

    /// Grid step used when none is given.
    pub fn default_grid(self) -> Rat {
        match self {
            Suite::Eq11 => rat(1, 8),
            Suite::Walls | Suite::Theorem7 => rat(1, 32),
            Suite::Corners | Suite::Dynamics | Suite::Metrics => rat(1, 16),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Eq11 => "eq11",
            Suite::Walls => "walls",
            Suite::Corners => "corners",
            Suite::Theorem7 => "theorem7",
            Suite::Dynamics => "dynamics",
            Suite::Metrics => "metrics",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub suite: Suite,
    #[serde(with = "crate::exact::rat_serde")]
    pub grid: Rat,
    pub seed: u64,
    pub pass: bool,
    pub checked: usize,
    /// At most [`MAX_DUMPS`] counterexamples.
    pub failures: Vec<Value>,
    pub failure_count: usize,
    pub details: Value,
}

pub const MAX_DUMPS: usize = 20;

struct Acc {
    checked: usize,
    failures: Vec<Value>,
    count: usize,
}

impl Acc {
    fn new() -> Self {
        Acc { checked: 0, failures: Vec::new(), count: 0 }
    }

    fn check(&mut self, ok: bool, dump: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.count += 1;
            if self.failures.len() < MAX_DUMPS {
                self.failures.push(dump());
            }
        }
    }

    fn finish(self, suite: Suite, grid: &Rat, seed: u64, details: Value) -> AuditReport {
        AuditReport {
            suite,
            grid: grid.clone(),
            seed,
            pass: self.count == 0,
            checked: self.checked,
            failures: self.failures,
            failure_count: self.count,
            details,
        }
    }
}

/// Runs a suite. `grid` defaults to [`Suite::default_grid`].
pub fn run(suite: Suite, grid: Option<Rat>, seed: u64) -> Result<AuditReport, Error> {
    let grid = grid.unwrap_or_else(|| suite.default_grid());
    if grid <= Rat::zero() || grid > rat(1, 2) {
        return Err(Error::OutOfDomain(format!("grid step {grid}")));
    }
    match suite {
        Suite::Eq11 => audit_eq11(&grid, seed),
        Suite::Walls => audit_walls(&grid, seed),
        Suite::Corners => audit_corners(&grid, seed),
        Suite::Theorem7 => audit_theorem7(&grid, seed),
        Suite::Dynamics => audit_dynamics(&grid, seed),
        Suite::Metrics => audit_metrics(&grid, seed),
    }
}

fn rand_rat<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rat {
    rat(rng.gen_range(lo * den..=hi * den), den)
}

/// A random rational point of Δ with denominators below 64.
pub fn random_delta<R: Rng>(rng: &mut R) -> DeltaPoint {
    let mut v: Vec<Rat> = (0..3)
        .map(|_| {
            let d = rng.gen_range(1..=63i64);
            rat(rng.gen_range(0..=d), 2 * d)
        })
        .collect();
    v.sort();
    DeltaPoint::new(v[2].clone(), v[1].clone(), v[0].clone()).expect("sorted into Δ")
}

/// A random rational point of the facet `f` of ∂I⁴.
pub fn random_on_facet<R: Rng>(rng: &mut R, f: FacetLabel) -> QPoint<4> {
    let fc = f.facet();
    let d = rng.gen_range(1..=40i64);
    QPoint::new(std::array::from_fn(|k| {
        if k == fc.axis {
            int(fc.side as i64)
        } else {
            rand_rat(rng, 0, 1, d)
        }
    }))
}

/// Pairs for the distance audit: `n_goal` with q on the grid of G, `n_other`
/// with q on the other facets, and a few q on the 2-faces of G.
pub fn eq11_pairs(grid: &Rat, seed: u64, n_goal: usize, n_other: usize) -> Vec<(DeltaPoint, QPoint<4>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (Rat::one() / grid).to_integer();
    let n: i64 = n.try_into().expect("small grid");
    let mut out = Vec::new();
    for _ in 0..n_goal {
        let p = random_delta(&mut rng);
        let mut g = || rat(rng.gen_range(0..=n), n);
        let q = QPoint::new([g(), g(), g(), int(1)]);
        out.push((p, q));
    }
    let others: Vec<FacetLabel> = FacetLabel::ALL.into_iter().filter(|f| *f != FacetLabel::G).collect();
    for k in 0..n_other {
        let p = random_delta(&mut rng);
        out.push((p, random_on_facet(&mut rng, others[k % others.len()])));
    }
    for f in [FacetLabel::B, FacetLabel::R, FacetLabel::U] {
        let p = random_delta(&mut rng);
        let mut q = random_on_facet(&mut rng, FacetLabel::G);
        let fc = f.facet();
        q.0[fc.axis] = int(fc.side as i64);
        out.push((p, q));
    }
    out
}

fn audit_eq11(grid: &Rat, seed: u64) -> Result<AuditReport, Error> {
    let pairs = eq11_pairs(grid, seed, 200, 50);
    let rep = eq11_audit(&pairs, 5)?;
    let mut acc = Acc::new();
    acc.checked = rep.pairs;
    for m in &rep.mismatches {
        acc.check(false, || json!(m));
    }
    acc.check(rep.saturated, || json!({"saturated": false, "max_len": rep.max_len}));
    Ok(acc.finish(Suite::Eq11, grid, seed, json!({"pairs": rep.pairs, "max_len": rep.max_len, "saturated": rep.saturated})))
}

fn planar_grid(step: &Rat) -> Vec<(Rat, Rat)> {
    let half = rat(1, 2);
    let mut out = Vec::new();
    let mut a = Rat::zero();
    while a <= half {
        let mut c = Rat::zero();
        while c <= a {
            out.push((a.clone(), c.clone()));
            c += step;
        }
        a += step;
    }
    out
}

fn audit_walls(grid: &Rat, seed: u64) -> Result<AuditReport, Error> {
    let planar: Vec<_> = planar_grid(grid)
        .into_par_iter()
        .map(|(a, c)| check_planar(&a, &c).map(|r| (a, c, r)))
        .collect::<Result<_, _>>()?;
    let spatial: Vec<_> = delta_grid(grid, true)
        .into_par_iter()
        .map(|p| check_spatial(&p).map(|r| (p, r)))
        .collect::<Result<_, _>>()?;
    let mut acc = Acc::new();
    let (mut tris, mut degenerate, mut alpha_misses) = (0, 0, 0);
    for (a, c, r) in &planar {
        tris += r.triangles;
        degenerate += r.degenerate;
        acc.check(r.ok(), || json!({"a": fmt_rat(a), "c": fmt_rat(c), "failures": r.failures}));
    }
    for (p, r) in &spatial {
        for t in r {
            if !t.alpha_empty {
                alpha_misses += 1;
            }
            acc.check(t.delaunay, || json!({"p": p.to_string(), "triangle": t}));
        }
    }
    let details = json!({
        "planar_points": planar.len(),
        "planar_triangles": tris,
        "planar_degenerate": degenerate,
        "spatial_points": spatial.len(),
        "alpha_sphere_not_empty": alpha_misses,
    });
    Ok(acc.finish(Suite::Walls, grid, seed, details))
}

fn audit_corners(grid: &Rat, seed: u64) -> Result<AuditReport, Error> {
    let dom_step = rat(1, 16);
    let rows: Vec<_> = delta_grid(grid, true)
        .into_par_iter()
        .map(|p| -> Result<_, Error> {
            let cs = corner_set(&p)?;
            let bad: Vec<String> = cs
                .corners
                .iter()
                .filter(|c| !verify_corner(&p, c))
                .map(|c| format!("{} at {}", c.triple, c.point))
                .collect();
            let dom = dominance_check(&p, &dom_step)?;
            Ok((p, cs.corners.len(), bad, dom))
        })
        .collect::<Result<_, _>>()?;
    let mut acc = Acc::new();
    let (mut corners, mut dom_samples) = (0, 0);
    for (p, n, bad, dom) in &rows {
        corners += n;
        dom_samples += dom.samples;
        acc.check(bad.is_empty(), || json!({"p": p.to_string(), "not_vertices": bad}));
        acc.check(dom.violations.is_empty(), || json!({"p": p.to_string(), "dominance": dom.violations}));
    }
    let details = json!({"points": rows.len(), "corners": corners, "dominance_samples": dom_samples});
    Ok(acc.finish(Suite::Corners, grid, seed, details))
}

/// Points that put interior samples in the two thin regions Δ12 and Δ22B.
pub fn thin_region_samples() -> Vec<DeltaPoint> {
    [(48, 48, 13), (49, 47, 13), (52, 44, 13), (52, 48, 13)]
        .into_iter()
        .map(|(a, b, c)| DeltaPoint::new(rat(a, 128), rat(b, 128), rat(c, 128)).expect("in Δ"))
        .collect()
}

/// One row of the farthest-map audit.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem7Row {
    pub p: String,
    pub region: RegionTag,
    pub interior: bool,
    pub points: usize,
    pub in_theorem: bool,
    pub sq_dist: String,
    pub grid_sq: String,
    /// `|f(p)| − max over the grid`, which must lie in `[0, √3/64]`.
    pub deficit: f64,
}

/// Farthest map on the grid plus [`thin_region_samples`], checked against
/// the theorem's candidate sets and a 1/64 oracle grid search.
pub fn theorem7_rows(grid: &Rat) -> Result<Vec<Theorem7Row>, Error> {
    let mut pts = delta_grid(grid, true);
    pts.extend(thin_region_samples());
    pts.into_par_iter()
        .map(|p| {
            let r = classify_delta(&p)?;
            let f = farthest_fundamental(&p)?;
            let (_, gsq) = oracle_farthest(&p, 64)?;
            Ok(Theorem7Row {
                p: p.to_string(),
                region: r.tag,
                interior: r.is_interior(),
                points: f.points.len(),
                in_theorem: agrees_with_theorem(&p, &f)?,
                deficit: if gsq > f.sq_dist { f64::NEG_INFINITY } else { to_f64(&f.sq_dist).sqrt() - to_f64(&gsq).sqrt() },
                sq_dist: fmt_rat(&f.sq_dist),
                grid_sq: fmt_rat(&gsq),
            })
        })
        .collect()
}

fn audit_theorem7(grid: &Rat, seed: u64) -> Result<AuditReport, Error> {
    let rows = theorem7_rows(grid)?;
    let bound = 3f64.sqrt() / 64.0;
    let mut acc = Acc::new();
    let mut interior = std::collections::BTreeMap::<String, usize>::new();
    for r in &rows {
        if r.interior {
            *interior.entry(r.region.to_string()).or_default() += 1;
        }
        acc.check(r.in_theorem && r.deficit >= 0.0 && r.deficit <= bound, || json!(r));
    }
    acc.check(interior.len() == RegionTag::ALL.len(), || json!({"regions_with_interior_samples": interior}));
    Ok(acc.finish(Suite::Theorem7, grid, seed, json!({"points": rows.len(), "interior_per_region": interior})))
}

/// Random rational points inside the descent windows, `per_window` each.
pub fn descent_samples(seed: u64, per_window: usize) -> Result<Vec<(DeltaPoint, crate::dynamics::DescentReport)>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = std::collections::HashMap::<&'static str, usize>::new();
    let mut out = Vec::new();
    for _ in 0..400_000 {
        if counts.len() == 3 && counts.values().all(|&n| n >= per_window) {
            break;
        }
        let a = rat(rng.gen_range(1..=1000), 10_000);
        let b = &a * rat(rng.gen_range(0..=1000), 1000);
        let c = &b * rat(rng.gen_range(1..=1000), 1000);
        if c.is_zero() {
            continue;
        }
        let p = DeltaPoint::new(a, b, c)?;
        let r = check_descent(&p)?;
        if let Some(w) = r.window {
            let n = counts.entry(w).or_default();
            if *n < per_window {
                *n += 1;
                out.push((p, r));
            }
        }
    }
    Ok(out)
}

fn audit_dynamics(grid: &Rat, seed: u64) -> Result<AuditReport, Error> {
    let mut acc = Acc::new();
    // ∂I³: orbits of the exact map settle at (b, b, 0)
    let half = rat(1, 2);
    let mut a = Rat::zero();
    let mut n3 = 0;
    while a <= &half - grid {
        let mut b = Rat::zero();
        while b <= a {
            let (trace, ok) = orbit_3cube(&a, &b, 100, 8, 1e-13)?;
            let l = *trace.last().expect("start");
            let bf = to_f64(&b);
            n3 += 1;
            acc.check((l[0] - bf).abs() < 1e-9 && (l[1] - bf).abs() < 1e-9, || {
                json!({"cube": 3, "a": fmt_rat(&a), "b": fmt_rat(&b), "last": l, "settled": ok})
            });
            b += grid;
        }
        a += grid;
    }
    // ∂I⁴: limits on the diagonal
    let opts = OrbitOptions::default();
    let sum = limit_set_summary(grid, &opts, 1e-6)?;
    let sixteenth = 1.0 / 16.0;
    for s in &sum.samples {
        let c0 = to_f64(&s.start[2]).min(to_f64(&s.start[1])).min(to_f64(&s.start[0]));
        let ok = s.resolved
            && s.deviation.is_some_and(|d| d < 1e-9)
            && s.c_limit.is_some_and(|c| c <= c0 + 1e-12 && (c0 < sixteenth || c > 1e-6))
            && s.same_facet;
        acc.check(ok, || json!(s));
    }
    // Δ11: c is preserved exactly and the region is forward invariant
    let mut d11 = 0;
    for p in delta_grid(grid, false) {
        let r = classify_delta(&p)?;
        if r.tag != RegionTag::D11 || !r.is_interior() {
            continue;
        }
        d11 += 1;
        let q = crate::dynamics::step(&p.point())?;
        let dq = DeltaPoint::reduce(&q)?;
        let rq = classify_delta(&dq)?;
        acc.check(dq.c == p.c && rq.members.contains(&RegionTag::D11), || {
            json!({"p": p.to_string(), "next": dq.to_string(), "region": rq.tag})
        });
    }
    // descent inequalities
    let desc = descent_samples(seed, 100)?;
    let mut per = std::collections::BTreeMap::<&str, usize>::new();
    for (p, r) in &desc {
        *per.entry(r.window.expect("window")).or_default() += 1;
        acc.check(r.holds(), || json!({"p": p.to_string(), "report": r}));
    }
    acc.check(per.len() == 3 && per.values().all(|&n| n == 100), || json!({"descent_samples": per}));
    let details = json!({
        "cube3_orbits": n3,
        "cube4_orbits": sum.samples.len(),
        "max_deviation": sum.max_deviation,
        "unresolved": sum.unresolved,
        "delta11_points": d11,
        "descent_samples": per,
    });
    Ok(acc.finish(Suite::Dynamics, grid, seed, details))
}

fn audit_metrics(grid: &Rat, seed: u64) -> Result<AuditReport, Error> {
    let mut acc = Acc::new();
    let mut reports = Vec::new();
    for n in [2usize, 3, 4] {
        let r = radius_diameter_exact(n, grid)?;
        let c = r.certificate.as_ref().expect("exact reports carry a certificate");
        acc.check(r.radius_sq == Some(int(4)), || json!({"n": n, "radius_sq": r.radius_sq.as_ref().map(fmt_rat)}));
        acc.check(r.diameter_sq == Some(int(n as i64 + 2)), || json!({"n": n, "diameter_sq": r.diameter_sq.as_ref().map(fmt_rat)}));
        acc.check(c.min_sq >= int(4) && c.max_sq <= int(n as i64 + 2), || json!({"n": n, "certificate": c}));
        acc.check((r.ratio - ratio_formula(n)).abs() < 1e-15, || json!({"n": n, "ratio": r.ratio}));
        if n == 4 {
            let h = fmt_rat(&rat(1, 2));
            acc.check(c.argmin == vec![h.clone(), h.clone(), h], || json!({"argmin": c.argmin}));
        }
        reports.push(r);
    }
    Ok(acc.finish(Suite::Metrics, grid, seed, json!(reports)))
}

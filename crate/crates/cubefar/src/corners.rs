//! Bisector heights, circumcenters of site triples with p_U, corner sets and
//! the corner criterion.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cube::{goal_site, goal_sites, DeltaPoint};
use crate::exact::{circumcenter, int, rat, QPoint, Rat};
use crate::region::{classify_delta, Region, RegionTag};
use crate::Error;

/// The sites that matter for the farthest point of p ∈ Δ.
pub const BACK_RIGHT: [&str; 11] = ["U", "D", "UR", "R", "RD", "UB", "B", "BD", "UBR", "BR", "BRD"];

/// Three distinct labels from `BACK_RIGHT` other than U.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteTriple(pub [&'static str; 3]);

impl SiteTriple {
    pub fn new(a: &str, b: &str, c: &str) -> Result<Self, Error> {
        let find = |s: &str| {
            BACK_RIGHT[1..]
                .iter()
                .copied()
                .find(|l| *l == s)
                .ok_or_else(|| Error::Parse(format!("{s} is not a BackRight site")))
        };
        let t = [find(a)?, find(b)?, find(c)?];
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(Error::Parse("labels must be distinct".into()));
        }
        Ok(SiteTriple(t))
    }

    pub fn labels(&self) -> [&'static str; 3] {
        self.0
    }

    pub fn contains(&self, l: &str) -> bool {
        self.0.contains(&l)
    }
}

impl fmt::Display for SiteTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

impl std::str::FromStr for SiteTriple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let v: Vec<&str> = s.split(',').map(str::trim).collect();
        match v.as_slice() {
            [a, b, c] => SiteTriple::new(a, b, c),
            _ => Err(Error::Parse(format!("expected three labels, got {s:?}"))),
        }
    }
}

impl Serialize for SiteTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

const fn t(a: &'static str, b: &'static str, c: &'static str) -> SiteTriple {
    SiteTriple([a, b, c])
}

/// v_k(U): the Voronoi corners of p_U for each region.
pub fn corner_triples(r: RegionTag) -> &'static [SiteTriple] {
    use RegionTag::*;
    const V11: [SiteTriple; 3] = [t("B", "D", "R"), t("B", "R", "UR"), t("UB", "B", "UR")];
    const V12: [SiteTriple; 4] =
        [t("BD", "D", "R"), t("B", "BD", "R"), t("B", "R", "UR"), t("UB", "B", "UR")];
    const V21: [SiteTriple; 4] =
        [t("B", "D", "RD"), t("B", "RD", "R"), t("B", "R", "UR"), t("UB", "B", "UR")];
    const V22A: [SiteTriple; 5] = [
        t("BD", "D", "RD"),
        t("B", "BD", "RD"),
        t("B", "RD", "R"),
        t("B", "R", "UR"),
        t("UB", "B", "UR"),
    ];
    const V22B: [SiteTriple; 5] = [
        t("BD", "D", "RD"),
        t("BD", "RD", "R"),
        t("B", "BD", "R"),
        t("B", "R", "UR"),
        t("UB", "B", "UR"),
    ];
    const V31: [SiteTriple; 3] = [t("B", "D", "RD"), t("B", "RD", "UR"), t("UB", "B", "UR")];
    const V32A: [SiteTriple; 4] =
        [t("BD", "D", "RD"), t("B", "BD", "RD"), t("B", "RD", "UR"), t("UB", "B", "UR")];
    const V32B: [SiteTriple; 4] =
        [t("BD", "D", "RD"), t("BD", "RD", "UR"), t("B", "BD", "UR"), t("UB", "B", "UR")];
    const V33: [SiteTriple; 3] = [t("BD", "D", "RD"), t("BD", "RD", "UR"), t("UB", "BD", "UR")];
    match r {
        D11 => &V11,
        D12 => &V12,
        D21 => &V21,
        D22A => &V22A,
        D22B => &V22B,
        D31 => &V31,
        D32A => &V32A,
        D32B => &V32B,
        D33 => &V33,
    }
}

/// The candidate set of the farthest-point theorem for each region.
pub fn theorem_candidates(r: RegionTag) -> &'static [SiteTriple] {
    use RegionTag::*;
    const T11: [SiteTriple; 1] = [t("B", "D", "R")];
    const T12: [SiteTriple; 1] = [t("BD", "D", "R")];
    const T21: [SiteTriple; 2] = [t("B", "D", "RD"), t("B", "RD", "R")];
    const T22A: [SiteTriple; 3] = [t("BD", "D", "RD"), t("B", "BD", "RD"), t("B", "RD", "R")];
    const T22B: [SiteTriple; 1] = [t("BD", "D", "RD")];
    const T31: [SiteTriple; 2] = [t("B", "D", "RD"), t("B", "RD", "UR")];
    const T32A: [SiteTriple; 3] = [t("BD", "D", "RD"), t("B", "BD", "RD"), t("B", "RD", "UR")];
    const T32B: [SiteTriple; 3] = [t("BD", "D", "RD"), t("BD", "RD", "UR"), t("B", "BD", "UR")];
    const T33: [SiteTriple; 3] = [t("BD", "D", "RD"), t("BD", "RD", "UR"), t("UB", "BD", "UR")];
    match r {
        D11 => &T11,
        D12 => &T12,
        D21 => &T21,
        D22A => &T22A,
        D22B => &T22B,
        D31 => &T31,
        D32A => &T32A,
        D32B => &T32B,
        D33 => &T33,
    }
}

fn nonzero(d: Rat, what: &str) -> Result<Rat, Error> {
    if d.is_zero() {
        Err(Error::Degenerate(format!("bisector of U and {what} is vertical")))
    } else {
        Ok(d)
    }
}

/// Height f_F(x, y) of the bisector of p_U and p_F above (x, y).
pub fn bisector_height(f: &str, x: &Rat, y: &Rat, p: &DeltaPoint) -> Result<Rat, Error> {
    let (a, b, c) = p.abc();
    let i = |n: i64| int(n);
    Ok(match f {
        "D" => i(1) - c,
        "UB" => (i(-2) + i(3) * b - c + (i(2) - b - c) * y) / nonzero(b - c, f)?,
        "B" => (i(3) * b - i(3) * c + (i(3) - i(2) * b) * y) / (i(3) - i(2) * c),
        "BD" => (i(2) + b - i(5) * c + (i(2) - b + c) * y) / (i(4) - b - c),
        "UR" => (i(-2) + i(3) * a - c + (i(2) - a - c) * x) / nonzero(a - c, f)?,
        "R" => (i(3) * a - i(3) * c + (i(3) - i(2) * a) * x) / (i(3) - i(2) * c),
        "RD" => (i(2) + a - i(5) * c + (i(2) - a + c) * x) / (i(4) - a - c),
        "UBR" => {
            (i(-4) + i(3) * a + i(2) * b - c + (i(2) - a - b) * x + (i(2) - b - c) * y)
                / nonzero(a - c, f)?
        }
        "BR" => {
            (i(-2) + i(3) * a + i(2) * b - i(3) * c + (i(2) - a - b) * x + (i(3) - a - b) * y)
                / (i(3) - i(2) * c)
        }
        "BRD" => {
            (a + i(2) * b - i(5) * c + (i(2) - a - b) * x + (i(2) - b + c) * y) / (i(4) - a - c)
        }
        _ => return Err(Error::Parse(format!("{f} is not a BackRight site other than U"))),
    })
}

/// Bisector height of p_U and any site, solved from the bisector equation.
pub fn bisector_height_generic(site: &QPoint<3>, x: &Rat, y: &Rat, p: &DeltaPoint) -> Option<Rat> {
    let u = goal_site(p, "U");
    let dz = &site[2] - &u[2];
    if dz.is_zero() {
        return None;
    }
    let rhs = site.norm2() - u.norm2() - int(2) * (x * (&site[0] - &u[0]) + y * (&site[1] - &u[1]));
    Some(rhs / (int(2) * dz))
}

/// Circumcenter of p_U and the triple, from the closed forms when one exists.
/// The flag is `true` when a closed form was used.
pub fn closed_form_center(tr: SiteTriple, p: &DeltaPoint) -> Result<(QPoint<3>, bool), Error> {
    if let Some(q) = closed_form(tr, p)? {
        return Ok((q, true));
    }
    Ok((generic_center(tr, p)?, false))
}

/// Circumcenter of p_U and the triple from the linear solver.
pub fn generic_center(tr: SiteTriple, p: &DeltaPoint) -> Result<QPoint<3>, Error> {
    let pts = [goal_site(p, "U"), goal_site(p, tr.0[0]), goal_site(p, tr.0[1]), goal_site(p, tr.0[2])];
    circumcenter(&pts)
}

fn phi1(x: &Rat, c: &Rat) -> Result<Rat, Error> {
    let d = int(3) - int(2) * x;
    Ok((x + int(2) * c * (int(1) - c)) / nonzero(d, "φ1")?)
}

fn phi2(x: &Rat, c: &Rat) -> Result<Rat, Error> {
    let d = int(2) - x + c;
    Ok((x + c) * (int(1) - c) / nonzero(d, "φ2")?)
}

fn div(n: Rat, d: Rat) -> Result<Rat, Error> {
    if d.is_zero() {
        return Err(Error::Degenerate("closed form has a vanishing denominator".into()));
    }
    Ok(n / d)
}

fn closed_form(tr: SiteTriple, p: &DeltaPoint) -> Result<Option<QPoint<3>>, Error> {
    let (a, b, c) = p.abc();
    let i = |n: i64| int(n);
    let h = rat(3, 2);
    let one = Rat::one();
    let k1 = i(4) - i(4) * a + a * a - i(2) * c + c * c;
    let k2 = i(3) - i(4) * b + b * b - c + c * c;
    let k3 = i(4) - i(4) * b + b * b - i(2) * c + c * c;
    let z = &one - c;
    let xyz = match tr.0 {
        ["B", "D", "R"] => [&one - phi1(a, c)?, &one - phi1(b, c)?, z],
        ["B", "D", "RD"] => [&one - phi2(a, c)?, &one - phi1(b, c)?, z],
        ["BD", "D", "R"] => [&one - phi1(a, c)?, &one - phi2(b, c)?, z],
        ["BD", "D", "RD"] => [&one - phi2(a, c)?, &one - phi2(b, c)?, z],
        ["B", "RD", "R"] => {
            let m = i(3) - i(4) * a + a * a - c + c * c;
            let w = i(1) - a + i(2) * c;
            [
                &h - div(&w * (i(3) - i(2) * c), i(2) * &m)?,
                &h - div((i(3) - i(2) * a) * &w * (i(3) - i(2) * c), i(2) * (i(3) - i(2) * b) * &m)?,
                &h - div((i(3) - i(2) * a) * &w, i(2) * &m)?,
            ]
        }
        ["B", "RD", "UR"] => [
            &one - div((i(2) - a + c) * (a - c), k1.clone())?,
            &h - div(
                (i(3) - i(2) * c) * (i(4) - i(4) * a + i(2) * c + a * a - i(3) * c * c),
                i(2) * (i(3) - i(2) * b) * &k1,
            )?,
            &one - div(i(2) * (i(1) - c) * c, k1)?,
        ],
        ["B", "BD", "RD"] => [
            i(3) - div(
                (i(4) - a - c) * (i(3) - i(3) * b + c) * (i(2) - b + c),
                i(2) * (i(2) - a + c) * &k2,
            )?,
            i(2) - div((i(1) - b + c) * (i(6) - b - i(3) * c), i(2) * &k2)?,
            div((i(1) - b - c) * (i(6) - b - i(3) * c), i(2) * k2)?,
        ],
        ["B", "BD", "UR"] => {
            let m = i(3) - i(4) * b - c + b * b + c * c;
            let w = i(1) - b + i(2) * c;
            [
                &one - div(
                    (a - c) * (i(3) - i(3) * b + c) * (i(2) - b + c),
                    i(2) * (i(2) - a - c) * &k2,
                )?,
                &h - div(&w * (i(3) - i(2) * c), i(2) * &m)?,
                &h - div((i(3) - i(2) * b) * &w, i(2) * m)?,
            ]
        }
        ["BD", "RD", "UR"] => [
            &one - div((i(2) - a + c) * (a - c), k1.clone())?,
            i(3) - div(
                (i(2) - a + c) * (i(2) - a - c) * (i(4) - b - c),
                (i(2) - b + c) * &k1,
            )?,
            &one - div(i(2) * (i(1) - c) * c, k1)?,
        ],
        ["UB", "BD", "UR"] => [
            &one - div((a - c) * (i(2) - b + c) * (i(2) - b - c), (i(2) - a - c) * &k3)?,
            &one - div((i(2) - b + c) * (b - c), k3.clone())?,
            &one - div(i(2) * (i(1) - c) * c, k3)?,
        ],
        _ => return Ok(None),
    };
    Ok(Some(QPoint::new(xyz)))
}

/// All triples that have a closed form.
pub const CLOSED_FORM_TRIPLES: [SiteTriple; 10] = [
    t("B", "D", "R"),
    t("B", "D", "RD"),
    t("BD", "D", "R"),
    t("BD", "D", "RD"),
    t("B", "RD", "R"),
    t("B", "RD", "UR"),
    t("B", "BD", "RD"),
    t("B", "BD", "UR"),
    t("BD", "RD", "UR"),
    t("UB", "BD", "UR"),
];

/// One Voronoi corner of p_U.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corner {
    pub triple: SiteTriple,
    pub point: QPoint<3>,
    /// Whether the point came from a closed form.
    pub closed_form: bool,
}

/// The corners of the Voronoi domain of p_U for a point of Δ.
#[derive(Clone, Debug)]
pub struct CornerSet {
    pub region: Region,
    pub corners: Vec<Corner>,
}

/// v_k(U) for the region of p; on region boundaries the union over every
/// containing region, deduplicated by triple.
pub fn corner_set(p: &DeltaPoint) -> Result<CornerSet, Error> {
    let region = classify_delta(p)?;
    let mut triples: Vec<SiteTriple> = Vec::new();
    for r in &region.members {
        for tr in corner_triples(*r) {
            if !triples.contains(tr) {
                triples.push(*tr);
            }
        }
    }
    let mut corners = Vec::with_capacity(triples.len());
    for tr in triples {
        let (point, closed_form) = match closed_form_center(tr, p) {
            Ok(x) => x,
            // closed forms can be singular on the boundary of Δ
            Err(Error::Degenerate(_)) => match generic_center(tr, p) {
                Ok(q) => (q, false),
                Err(Error::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            },
            Err(e) => return Err(e),
        };
        corners.push(Corner { triple: tr, point, closed_form });
    }
    Ok(CornerSet { region, corners })
}

/// The corner criterion: `z0` equals the maximum of the bisector heights at
/// `(x0, y0)` and the triple's sites attain it. Sites whose bisector with
/// p_U is vertical are tested by squared distance instead.
pub fn verify_corner(p: &DeltaPoint, corner: &Corner) -> bool {
    let q = &corner.point;
    let u = goal_site(p, "U");
    let r2 = q.dist2(&u);
    let mut fmax: Option<Rat> = None;
    for f in &BACK_RIGHT[1..] {
        let member = corner.triple.contains(f);
        match bisector_height(f, &q[0], &q[1], p) {
            Ok(h) => {
                if member && h != q[2] {
                    return false;
                }
                if fmax.as_ref().is_none_or(|m| h > *m) {
                    fmax = Some(h);
                }
            }
            Err(_) => {
                let d = q.dist2(&goal_site(p, f));
                if d < r2 || (member && d != r2) {
                    return false;
                }
            }
        }
    }
    fmax.is_none_or(|m| m == q[2])
}

/// Whether a point is a Voronoi vertex of p_U against all 26 sites: no site
/// strictly closer than p_U.
pub fn is_voronoi_vertex(p: &DeltaPoint, q: &QPoint<3>) -> bool {
    let r2 = q.dist2(&goal_site(p, "U"));
    goal_sites(p).iter().all(|(_, s)| q.dist2(s) >= r2)
}

/// Outcome of the dominated-site spot check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub samples: usize,
    pub skipped: usize,
    /// Grid points where the dominated height equals the maximum.
    pub ties: usize,
    pub violations: Vec<(String, String, &'static str)>,
}

/// Checks on the grid `[a,1)×[b,1)` of step `step` that UBR, BR and BRD never
/// exceed the maximum bisector height:
/// f_UBR ≤ max(f_UB, f_UR), f_BR ≤ max(f_B, f_UR), f_BRD ≤ max(f_BD, f_UR).
/// Equalities occur on degenerate configurations and are counted in `ties`.
pub fn dominance_check(p: &DeltaPoint, step: &Rat) -> Result<DominanceReport, Error> {
    if *step <= Rat::zero() || *step > Rat::one() {
        return Err(Error::OutOfDomain(format!("grid step {step}")));
    }
    let (a, b, _) = p.abc();
    let mut rep = DominanceReport::default();
    let grid = |start: &Rat| {
        let mut v = Vec::new();
        let mut x = start.clone();
        while x < Rat::one() {
            v.push(x.clone());
            x += step;
        }
        v
    };
    let (xs, ys) = (grid(a), grid(b));
    let rules: [(&str, &str, &'static str); 3] = [("UB", "UR", "UBR"), ("B", "UR", "BR"), ("BD", "UR", "BRD")];
    for x in &xs {
        for y in &ys {
            for (f1, f2, g) in rules {
                let h = |f: &str| bisector_height(f, x, y, p).ok();
                let (Some(h1), Some(h2), Some(hg)) = (h(f1), h(f2), h(g)) else {
                    rep.skipped += 1;
                    continue;
                };
                rep.samples += 1;
                let m = h1.max(h2);
                if hg > m {
                    rep.violations.push((x.to_string(), y.to_string(), g));
                } else if hg == m {
                    rep.ties += 1;
                }
            }
        }
    }
    Ok(rep)
}

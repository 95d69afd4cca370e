//! Facets, unfolding isometries, source images, symmetry reduction, and the
//! source-image distance formula on ∂I⁴ (and ∂I³).

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{int, rat, QPoint, Rat};
use crate::Error;

/// Facet names. `L,R` fix x, `F,B` fix y, `D,U` fix z, `S,G` fix w; the
/// first of each pair is the `0` side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FacetLabel {
    L,
    R,
    F,
    B,
    D,
    U,
    S,
    G,
}

impl FacetLabel {
    pub const ALL: [FacetLabel; 8] = {
        use FacetLabel::*;
        [L, R, F, B, D, U, S, G]
    };
    pub const CUBE3: [FacetLabel; 6] = {
        use FacetLabel::*;
        [L, R, F, B, D, U]
    };

    pub fn axis(self) -> usize {
        self as usize / 2
    }

    /// `0` or `1`: the fixed coordinate value.
    pub fn side(self) -> u8 {
        self as u8 % 2
    }

    pub fn facet(self) -> Facet {
        Facet { axis: self.axis(), side: self.side() }
    }

    pub fn opposite(self) -> FacetLabel {
        FacetLabel::ALL[(self as usize) ^ 1]
    }

    pub fn from_facet(f: Facet) -> Option<FacetLabel> {
        (f.axis < 4).then(|| FacetLabel::ALL[2 * f.axis + f.side as usize])
    }

    pub fn as_char(self) -> char {
        "LRFBDUSG".as_bytes()[self as usize] as char
    }

    pub fn from_char(c: char) -> Option<FacetLabel> {
        "LRFBDUSG".find(c).map(|i| FacetLabel::ALL[i])
    }

    /// Facets of ∂Iⁿ for n = 3 or 4.
    pub fn for_dim(n: usize) -> &'static [FacetLabel] {
        if n == 3 {
            &Self::CUBE3
        } else {
            &Self::ALL
        }
    }
}

impl fmt::Display for FacetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A facet of ∂Iⁿ for any n: `{x : x_axis = side}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub axis: usize,
    pub side: u8,
}

impl Facet {
    pub fn adjacent(self, o: Facet) -> bool {
        self.axis != o.axis
    }

    pub fn opposite(self) -> Facet {
        Facet { axis: self.axis, side: 1 - self.side }
    }

    /// All 2n facets of ∂Iⁿ.
    pub fn all(n: usize) -> Vec<Facet> {
        (0..n)
            .flat_map(|axis| [0, 1].map(|side| Facet { axis, side }))
            .collect()
    }

    fn name(self) -> String {
        FacetLabel::from_facet(self)
            .map(|l| l.to_string())
            .unwrap_or_else(|| format!("x{}={}", self.axis, self.side))
    }
}

/// Affine map `x_k = shift_k ± y[perm_k]`: a signed coordinate permutation
/// followed by an integer translation. Every unfolding map of the unit cube
/// and every symmetry of the cube has this form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    pub perm: Vec<usize>,
    pub neg: Vec<bool>,
    pub shift: Vec<i64>,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry { perm: (0..n).collect(), neg: vec![false; n], shift: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Isometry::identity(self.dim())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Isometry) -> Isometry {
        let n = self.dim();
        let mut out = Isometry::identity(n);
        for k in 0..n {
            let j = self.perm[k];
            out.perm[k] = inner.perm[j];
            out.neg[k] = self.neg[k] ^ inner.neg[j];
            out.shift[k] = self.shift[k] + if self.neg[k] { -inner.shift[j] } else { inner.shift[j] };
        }
        out
    }

    pub fn inverse(&self) -> Isometry {
        let n = self.dim();
        let mut out = Isometry::identity(n);
        for k in 0..n {
            let j = self.perm[k];
            out.perm[j] = k;
            out.neg[j] = self.neg[k];
            out.shift[j] = if self.neg[k] { self.shift[k] } else { -self.shift[k] };
        }
        out
    }

    pub fn apply(&self, y: &[Rat]) -> Vec<Rat> {
        (0..self.dim())
            .map(|k| {
                let v = &y[self.perm[k]];
                let s = int(self.shift[k]);
                if self.neg[k] {
                    s - v
                } else {
                    s + v
                }
            })
            .collect()
    }

    pub fn apply4(&self, p: &QPoint<4>) -> QPoint<4> {
        QPoint::from_slice(&self.apply(&p.0)).expect("dimension 4")
    }

    pub fn apply3(&self, p: &QPoint<3>) -> QPoint<3> {
        QPoint::from_slice(&self.apply(&p.0)).expect("dimension 3")
    }

    pub fn apply_f64(&self, y: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                let v = y[self.perm[k]];
                self.shift[k] as f64 + if self.neg[k] { -v } else { v }
            })
            .collect()
    }

    pub fn apply_i64(&self, y: &[i64]) -> Vec<i64> {
        (0..self.dim())
            .map(|k| {
                let v = y[self.perm[k]];
                self.shift[k] + if self.neg[k] { -v } else { v }
            })
            .collect()
    }

    /// Human-readable description, e.g. `x↦1-x, y↦z, ...`.
    pub fn describe(&self) -> String {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        let name = |i: usize| NAMES.get(i).map(|s| s.to_string()).unwrap_or(format!("x{i}"));
        (0..self.dim())
            .map(|k| {
                let src = name(self.perm[k]);
                let rhs = match (self.shift[k], self.neg[k]) {
                    (0, false) => src,
                    (0, true) => format!("-{src}"),
                    (s, false) => format!("{s}+{src}"),
                    (s, true) => format!("{s}-{src}"),
                };
                format!("{}'={rhs}", name(k))
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl Serialize for Isometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.describe())
    }
}

/// The unfolding map φ_{F,F′}: aff(F′) → aff(F) in ℝⁿ.
///
/// It is the rotation about the shared (n−2)-face that carries F′ into the
/// hyperplane of F, on the far side of the shared face.
pub fn unfold_step_facets(f: Facet, g: Facet, n: usize) -> Result<Isometry, Error> {
    if f.axis >= n || g.axis >= n {
        return Err(Error::Unsupported(format!("facet outside dimension {n}")));
    }
    if !f.adjacent(g) {
        return Err(Error::NotAdjacent(f.name(), g.name()));
    }
    let (i, s) = (f.axis, f.side as i64);
    let (j, t) = (g.axis, g.side as i64);
    let si = if s == 0 { 1 } else { -1 };
    let sj = if t == 0 { -1 } else { 1 };
    let mut iso = Isometry::identity(n);
    // x_j = t + sj·si·(y_i − s),  x_i = s − si·sj·(y_j − t)
    iso.perm[j] = i;
    iso.neg[j] = sj * si < 0;
    iso.shift[j] = t - sj * si * s;
    iso.perm[i] = j;
    iso.neg[i] = si * sj > 0;
    iso.shift[i] = s + si * sj * t;
    Ok(iso)
}

/// φ_{F,F′} for labelled facets of ∂Iⁿ.
pub fn unfold_step(f: FacetLabel, g: FacetLabel, n: usize) -> Result<Isometry, Error> {
    unfold_step_facets(f.facet(), g.facet(), n)
}

/// φ_L for a facet sequence `F1..Fl`, mapping aff(Fl) → aff(F1).
pub fn unfold_facets(seq: &[Facet], n: usize) -> Result<Isometry, Error> {
    if seq.is_empty() {
        return Err(Error::InvalidSequence("empty sequence".into()));
    }
    let mut iso = Isometry::identity(n);
    for w in seq.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidSequence(format!("repeated facet {}", w[0].name())));
        }
        iso = iso.compose(&unfold_step_facets(w[0], w[1], n)?);
    }
    Ok(iso)
}

/// An ordered facet sequence, written like `GUFS`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnfoldSeq(pub Vec<FacetLabel>);

impl UnfoldSeq {
    pub fn isometry(&self, n: usize) -> Result<Isometry, Error> {
        let f: Vec<Facet> = self.0.iter().map(|l| l.facet()).collect();
        unfold_facets(&f, n)
    }

    pub fn first(&self) -> FacetLabel {
        self.0[0]
    }

    pub fn last(&self) -> FacetLabel {
        *self.0.last().expect("nonempty")
    }
}

impl FromStr for UnfoldSeq {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let v = s
            .chars()
            .map(|c| {
                FacetLabel::from_char(c)
                    .ok_or_else(|| Error::InvalidSequence(format!("unknown facet {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        Ok(UnfoldSeq(v))
    }
}

impl fmt::Display for UnfoldSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// φ_L for a sequence written as a string, e.g. `unfold_str("GUS", 4)`.
pub fn unfold_str(seq: &str, n: usize) -> Result<Isometry, Error> {
    seq.parse::<UnfoldSeq>()?.isometry(n)
}

/// Facets of ∂Iⁿ containing `p`.
pub fn facets_containing(p: &[Rat]) -> Result<Vec<Facet>, Error> {
    let zero = Rat::zero();
    let one = Rat::one();
    if p.iter().any(|x| *x < zero || *x > one) {
        return Err(Error::NotOnBoundary(fmt_slice(p)));
    }
    let out: Vec<Facet> = p
        .iter()
        .enumerate()
        .flat_map(|(axis, x)| {
            let mut v = Vec::new();
            if *x == zero {
                v.push(Facet { axis, side: 0 });
            }
            if *x == one {
                v.push(Facet { axis, side: 1 });
            }
            v
        })
        .collect();
    if out.is_empty() {
        return Err(Error::NotOnBoundary(fmt_slice(p)));
    }
    Ok(out)
}

/// Labelled facets of ∂I⁴ containing `p`.
pub fn facet_of(p: &QPoint<4>) -> Result<Vec<FacetLabel>, Error> {
    Ok(facets_containing(&p.0)?
        .into_iter()
        .filter_map(FacetLabel::from_facet)
        .collect())
}

pub(crate) fn fmt_slice(p: &[Rat]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// The hyperoctahedral group of Iⁿ as maps `x_k ↦ x_{perm k}` or
/// `1 − x_{perm k}`, ordered by permutation (lexicographic) and then by the
/// flip mask (bit k set when coordinate k is flipped).
pub fn symmetry_group(n: usize) -> &'static [Isometry] {
    static G3: OnceLock<Vec<Isometry>> = OnceLock::new();
    static G4: OnceLock<Vec<Isometry>> = OnceLock::new();
    let build = || {
        let mut perms = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        perms.sort();
        let mut out = Vec::new();
        for perm in perms {
            for mask in 0..(1u32 << n) {
                let neg: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
                let shift = neg.iter().map(|&b| b as i64).collect();
                out.push(Isometry { perm: perm.clone(), neg, shift });
            }
        }
        out
    };
    match n {
        3 => G3.get_or_init(build),
        4 => G4.get_or_init(build),
        _ => panic!("symmetry_group supports n = 3, 4"),
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Membership in the fundamental domain: last coordinate 0 and
/// `0 ≤ x_{n-2} ≤ … ≤ x_0 ≤ 1/2`.
pub fn in_fundamental(x: &[Rat]) -> bool {
    let n = x.len();
    if !x[n - 1].is_zero() || x[0] > rat(1, 2) || x[n - 2] < Rat::zero() {
        return false;
    }
    (0..n - 2).all(|k| x[k] >= x[k + 1])
}

/// First group element (in [`symmetry_group`] order) mapping `p` into the
/// fundamental domain, with the image.
pub fn reduce_generic(p: &[Rat]) -> Result<(Vec<Rat>, Isometry), Error> {
    facets_containing(p)?;
    for g in symmetry_group(p.len()) {
        let y = g.apply(p);
        if in_fundamental(&y) {
            return Ok((y, g.clone()));
        }
    }
    Err(Error::Inconsistent(format!("no symmetry reduces {}", fmt_slice(p))))
}

/// Group elements fixing `p`.
pub fn stabilizer(p: &[Rat]) -> Vec<&'static Isometry> {
    symmetry_group(p.len())
        .iter()
        .filter(|g| g.apply(p) == p)
        .collect()
}

/// A source point `(a,b,c,0)` of the fundamental domain Δ,
/// `0 ≤ c ≤ b ≤ a ≤ 1/2`, with the symmetry that carried the original
/// surface point there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPoint {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub witness: Isometry,
}

impl DeltaPoint {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Result<Self, Error> {
        let ok = Rat::zero() <= c && c <= b && b <= a && a <= rat(1, 2);
        if !ok {
            return Err(Error::OutOfDomain(format!("({a},{b},{c}) is not in Δ")));
        }
        Ok(DeltaPoint { a, b, c, witness: Isometry::identity(4) })
    }

    /// Reduces any point of ∂I⁴ into Δ.
    pub fn reduce(p: &QPoint<4>) -> Result<Self, Error> {
        let (y, g) = reduce_generic(&p.0)?;
        let [a, b, c, _] = <[Rat; 4]>::try_from(y).expect("dimension 4");
        Ok(DeltaPoint { a, b, c, witness: g })
    }

    /// `(a, b, c, 0)`.
    pub fn point(&self) -> QPoint<4> {
        QPoint::new([self.a.clone(), self.b.clone(), self.c.clone(), Rat::zero()])
    }

    /// The surface point this was reduced from.
    pub fn original(&self) -> QPoint<4> {
        self.witness.inverse().apply4(&self.point())
    }

    pub fn abc(&self) -> (&Rat, &Rat, &Rat) {
        (&self.a, &self.b, &self.c)
    }
}

impl fmt::Display for DeltaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

/// The 26 labels L of src(G); the image is p_L = φ_{G L S}(p).
pub const LBL_G: [&str; 26] = [
    "U", "D", "UF", "F", "FD", "UB", "B", "BD", "UL", "L", "LD", "UR", "R", "RD", "ULF", "LF",
    "LFD", "URF", "RF", "RFD", "UBL", "BL", "BLD", "UBR", "BR", "BRD",
];

/// Labels of the source images of each facet of ∂I⁴, written as full
/// unfolding sequences ending in `S`.
pub fn src_labels(f: FacetLabel) -> Vec<String> {
    let v: &[&str] = match f {
        FacetLabel::S => &["S"],
        FacetLabel::D => &["DS"],
        FacetLabel::F => &["FS", "FDS"],
        FacetLabel::L => &["LS", "LDS", "LFS", "LFDS"],
        FacetLabel::R => &["RS", "RDS", "RFS", "RFDS"],
        FacetLabel::B => &["BS", "BDS", "BLS", "BLDS", "BRS", "BRDS"],
        FacetLabel::U => &["US", "UFS", "UBS", "ULS", "ULFS", "UBLS", "URS", "URFS", "UBRS"],
        FacetLabel::G => return LBL_G.iter().map(|l| format!("G{l}S")).collect(),
    };
    v.iter().map(|s| s.to_string()).collect()
}

/// Labels of the source images of each facet of ∂I³ for a source on D with
/// `0 ≤ b ≤ a ≤ 1/2`.
pub fn src_labels_3cube(f: FacetLabel) -> Result<Vec<String>, Error> {
    let v: &[&str] = match f {
        FacetLabel::D => &["D"],
        FacetLabel::F => &["FD"],
        FacetLabel::B => &["BD", "BLD", "BRD"],
        FacetLabel::L => &["LD", "LFD"],
        FacetLabel::R => &["RD", "RFD"],
        FacetLabel::U => &["UFD", "UBD", "UBLD", "ULD", "ULFD", "UBRD", "URD", "URFD"],
        _ => return Err(Error::Unsupported(format!("facet {f} on the 3-cube"))),
    };
    Ok(v.iter().map(|s| s.to_string()).collect())
}

/// Closed form of p_L in the chart of aff(G) (last coordinate dropped).
pub fn image_closed_form(label: &str, a: &Rat, b: &Rat, c: &Rat) -> Option<QPoint<3>> {
    let i = |n: i64| int(n);
    let [x, y, z] = match label {
        "U" => [a.clone(), b.clone(), i(3) - c],
        "D" => [a.clone(), b.clone(), i(-1) - c],
        "UF" => [a.clone(), i(-1) + c, i(2) + b],
        "F" => [a.clone(), i(-1) - b, c.clone()],
        "FD" => [a.clone(), i(-1) - c, -b.clone()],
        "UB" => [a.clone(), i(2) - c, i(3) - b],
        "B" => [a.clone(), i(3) - b, c.clone()],
        "BD" => [a.clone(), i(2) + c, i(-1) + b],
        "UL" => [i(-1) + c, b.clone(), i(2) + a],
        "L" => [i(-1) - a, b.clone(), c.clone()],
        "LD" => [i(-1) - c, b.clone(), -a.clone()],
        "UR" => [i(2) - c, b.clone(), i(3) - a],
        "R" => [i(3) - a, b.clone(), c.clone()],
        "RD" => [i(2) + c, b.clone(), i(-1) + a],
        "ULF" => [i(-1) + c, -a.clone(), i(2) + b],
        "LF" => [i(-1) - b, -a.clone(), c.clone()],
        "LFD" => [i(-1) - c, -a.clone(), -b.clone()],
        "URF" => [i(2) - c, i(-1) + a, i(2) + b],
        "RF" => [i(2) + b, i(-1) + a, c.clone()],
        "RFD" => [i(2) + c, i(-1) + a, -b.clone()],
        "UBL" => [i(-1) + b, i(2) - c, i(2) + a],
        "BL" => [i(-1) + b, i(2) + a, c.clone()],
        "BLD" => [i(-1) + b, i(2) + c, -a.clone()],
        "UBR" => [i(2) - b, i(2) - c, i(3) - a],
        "BR" => [i(2) - b, i(3) - a, c.clone()],
        "BRD" => [i(2) - b, i(2) + c, i(-1) + a],
        _ => return None,
    };
    Some(QPoint::new([x, y, z]))
}

/// A source image: a label and a point in the affine hull of a facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceImage<const D: usize> {
    pub label: String,
    pub point: QPoint<D>,
}

/// The 26 source images of src(G), from the closed forms, as points of ℝ⁴
/// with last coordinate 1.
pub fn source_images_4cube(p: &DeltaPoint) -> Vec<SourceImage<4>> {
    LBL_G
        .iter()
        .map(|l| {
            let q = image_closed_form(l, &p.a, &p.b, &p.c).expect("known label");
            let [x, y, z] = q.0;
            SourceImage { label: l.to_string(), point: QPoint::new([x, y, z, Rat::one()]) }
        })
        .collect()
}

/// The 26 images of src(G) in the chart of aff(G).
pub fn goal_sites(p: &DeltaPoint) -> Vec<(&'static str, QPoint<3>)> {
    LBL_G
        .iter()
        .map(|l| (*l, image_closed_form(l, &p.a, &p.b, &p.c).expect("known label")))
        .collect()
}

/// One goal-chart site by label.
pub fn goal_site(p: &DeltaPoint, label: &str) -> QPoint<3> {
    image_closed_form(label, &p.a, &p.b, &p.c).expect("known label")
}

/// Source images of every facet, computed by the unfolding maps.
pub fn src_all_facets(p: &DeltaPoint) -> Vec<(FacetLabel, Vec<SourceImage<4>>)> {
    let base = p.point();
    FacetLabel::ALL
        .iter()
        .map(|&f| {
            let imgs = src_labels(f)
                .into_iter()
                .map(|seq| {
                    let iso = unfold_str(&seq, 4).expect("valid sequence");
                    SourceImage { point: iso.apply4(&base), label: seq }
                })
                .collect();
            (f, imgs)
        })
        .collect()
}

fn check_3cube_domain(a: &Rat, b: &Rat) -> Result<(), Error> {
    if !(Rat::zero() <= *b && b <= a && *a <= rat(1, 2)) {
        return Err(Error::OutOfDomain(format!("({a},{b}) needs 0 ≤ b ≤ a ≤ 1/2")));
    }
    Ok(())
}

/// The eight source images of src(U) on ∂I³ for `p = (a,b,0)`, in aff(U).
pub fn source_images_3cube(a: &Rat, b: &Rat) -> Result<Vec<SourceImage<3>>, Error> {
    check_3cube_domain(a, b)?;
    let i = |n: i64| int(n);
    let one = Rat::one();
    let forms: [(&str, [Rat; 3]); 8] = [
        ("F", [a.clone(), i(-1) - b, one.clone()]),
        ("B", [a.clone(), i(3) - b, one.clone()]),
        ("BL", [i(-1) + b, i(2) + a, one.clone()]),
        ("L", [i(-1) - a, b.clone(), one.clone()]),
        ("LF", [i(-1) - b, -a.clone(), one.clone()]),
        ("BR", [i(2) - b, i(3) - a, one.clone()]),
        ("R", [i(3) - a, b.clone(), one.clone()]),
        ("RF", [i(2) + b, i(-1) + a, one]),
    ];
    Ok(forms
        .into_iter()
        .map(|(l, c)| SourceImage { label: l.to_string(), point: QPoint::new(c) })
        .collect())
}

/// Squared distance from `p ∈ Δ` to `q ∈ G` (chart coordinates) as the
/// minimum over the 26 images, with the labels attaining it.
pub fn dist_to_goal(p: &DeltaPoint, q: &QPoint<3>) -> Result<(Rat, Vec<&'static str>), Error> {
    if q.0.iter().any(|x| *x < Rat::zero() || *x > Rat::one()) {
        return Err(Error::OutOfDomain(format!("{q} is not in the goal facet")));
    }
    let mut best: Option<Rat> = None;
    let mut arg = Vec::new();
    for (l, s) in goal_sites(p) {
        let d = s.dist2(q);
        match &best {
            Some(b) if d > *b => {}
            Some(b) if d == *b => arg.push(l),
            _ => {
                best = Some(d);
                arg = vec![l];
            }
        }
    }
    Ok((best.expect("26 sites"), arg))
}

/// Squared intrinsic distance from `p ∈ Δ` to any `q ∈ ∂I⁴`, taking the
/// minimum over src(F) for the facets F containing q. The value must agree
/// across all containing facets.
pub fn dist_on_surface(p: &DeltaPoint, q: &QPoint<4>) -> Result<Rat, Error> {
    let base = p.point();
    let mut out: Option<Rat> = None;
    for f in facet_of(q)? {
        let m = src_labels(f)
            .iter()
            .map(|seq| unfold_str(seq, 4).expect("valid").apply4(&base).dist2(q))
            .min()
            .expect("nonempty");
        match &out {
            Some(v) if *v != m => {
                return Err(Error::Inconsistent(format!(
                    "facet {f} gives {m}, another facet gives {v} for q={q}"
                )))
            }
            _ => out = Some(m),
        }
    }
    Ok(out.expect("q lies on some facet"))
}

/// Squared intrinsic distance between any two points of ∂I⁴.
pub fn surface_dist2(p: &QPoint<4>, q: &QPoint<4>) -> Result<Rat, Error> {
    facet_of(q)?;
    let dp = DeltaPoint::reduce(p)?;
    dist_on_surface(&dp, &dp.witness.apply4(q))
}

/// Squared intrinsic distance on ∂I³ from `(a,b,0)` (`0 ≤ b ≤ a ≤ 1/2`) to `q`.
pub fn dist_3cube_fundamental(a: &Rat, b: &Rat, q: &QPoint<3>) -> Result<Rat, Error> {
    check_3cube_domain(a, b)?;
    let base = [a.clone(), b.clone(), Rat::zero()];
    let mut out: Option<Rat> = None;
    for f in facets_containing(&q.0)? {
        let lab = FacetLabel::from_facet(f).expect("3-cube facet");
        let m = src_labels_3cube(lab)?
            .iter()
            .map(|seq| {
                let img = unfold_str(seq, 3).expect("valid").apply(&base);
                QPoint::<3>::from_slice(&img).expect("dim 3").dist2(q)
            })
            .min()
            .expect("nonempty");
        match &out {
            Some(v) if *v != m => {
                return Err(Error::Inconsistent(format!("3-cube facets disagree at {q}")))
            }
            _ => out = Some(m),
        }
    }
    Ok(out.expect("q lies on some facet"))
}

/// Squared intrinsic distance between two points of ∂I³.
pub fn surface_dist2_3cube(p: &QPoint<3>, q: &QPoint<3>) -> Result<Rat, Error> {
    facets_containing(&q.0)?;
    let (y, g) = reduce_generic(&p.0)?;
    dist_3cube_fundamental(&y[0], &y[1], &g.apply3(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q4(s: &str) -> QPoint<4> {
        s.parse().unwrap()
    }

    #[test]
    fn facet_of_examples() {
        assert_eq!(facet_of(&q4("2/5,1/3,1/6,0")).unwrap(), vec![FacetLabel::S]);
        assert_eq!(
            facet_of(&q4("2/5,1/3,0,0")).unwrap(),
            vec![FacetLabel::D, FacetLabel::S]
        );
        assert!(facet_of(&q4("1/2,1/2,1/2,1/2")).is_err());
        assert!(facet_of(&q4("2,0,0,0")).is_err());
    }

    #[test]
    fn step_3cube_p_f() {
        // φ_{U,F} ∘ φ_{F,D} on (a,b,0) gives (a, −1−b, 1)
        let iso = unfold_str("UFD", 3).unwrap();
        let p = [rat(1, 3), rat(1, 6), Rat::zero()];
        assert_eq!(iso.apply(&p), vec![rat(1, 3), rat(-7, 6), int(1)]);
    }

    #[test]
    fn step_fixes_shared_face() {
        for f in FacetLabel::ALL {
            for g in FacetLabel::ALL {
                if f.axis() == g.axis() {
                    assert!(unfold_step(f, g, 4).is_err());
                    continue;
                }
                let iso = unfold_step(f, g, 4).unwrap();
                for mask in 0..16u32 {
                    let mut v: Vec<Rat> = (0..4).map(|k| int((mask >> k & 1) as i64)).collect();
                    v[f.axis()] = int(f.side() as i64);
                    v[g.axis()] = int(g.side() as i64);
                    assert_eq!(iso.apply(&v), v);
                }
                // the far facet leaves itself: its centre lands off F′
                let mut c = vec![rat(1, 2); 4];
                c[g.axis()] = int(g.side() as i64);
                let img = iso.apply(&c);
                assert_eq!(img[f.axis()], int(f.side() as i64));
                assert_ne!(img[g.axis()], int(g.side() as i64));
            }
        }
    }

    #[test]
    fn goal_unfold_examples() {
        let p = q4("2/5,1/3,1/6,0");
        assert_eq!(unfold_str("GUS", 4).unwrap().apply4(&p), q4("2/5,1/3,17/6,1"));
        assert!(unfold_str("S", 4).unwrap().is_identity());
        assert!(unfold_str("SG", 4).is_err());
        assert!(unfold_str("GG", 4).is_err());
        let long = unfold_str("GBRDS", 4).unwrap();
        let split = unfold_str("GBR", 4).unwrap().compose(&unfold_str("RDS", 4).unwrap());
        assert_eq!(long, split);
    }

    #[test]
    fn images_match_unfoldings() {
        let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 6)).unwrap();
        let imgs = source_images_4cube(&p);
        assert_eq!(imgs.len(), 26);
        for img in &imgs {
            let seq = format!("G{}S", img.label);
            assert_eq!(unfold_str(&seq, 4).unwrap().apply4(&p.point()), img.point, "{seq}");
        }
        let brd = imgs.iter().find(|i| i.label == "BRD").unwrap();
        assert_eq!(brd.point, q4("5/3,13/6,-3/5,1"));
    }

    #[test]
    fn src_sizes() {
        let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 6)).unwrap();
        let all = src_all_facets(&p);
        let sizes: Vec<usize> = all.iter().map(|(_, v)| v.len()).collect();
        // order L,R,F,B,D,U,S,G
        assert_eq!(sizes, vec![4, 4, 2, 6, 1, 9, 1, 26]);
        assert_eq!(sizes.iter().sum::<usize>(), 53);
        for (f, imgs) in &all {
            for i in imgs {
                assert_eq!(i.point[f.axis()], int(f.side() as i64), "{f} {}", i.label);
            }
        }
    }

    #[test]
    fn images_3cube() {
        let imgs = source_images_3cube(&rat(1, 3), &rat(1, 6)).unwrap();
        let get = |l: &str| imgs.iter().find(|i| i.label == l).unwrap().point.clone();
        assert_eq!(get("F"), "1/3,-7/6,1".parse().unwrap());
        assert_eq!(get("R"), "8/3,1/6,1".parse().unwrap());
        let base = [rat(1, 3), rat(1, 6), Rat::zero()];
        for i in &imgs {
            let seq = format!("U{}D", i.label);
            let v = unfold_str(&seq, 3).unwrap().apply(&base);
            assert_eq!(QPoint::<3>::from_slice(&v).unwrap(), i.point, "{seq}");
        }
        let corner = source_images_3cube(&Rat::zero(), &Rat::zero()).unwrap();
        assert_eq!(corner[5].point, QPoint::from_ints([2, 3, 1]));
        assert!(source_images_3cube(&rat(1, 3), &rat(1, 2)).is_err());
    }

    #[test]
    fn reduce_examples() {
        let d = DeltaPoint::reduce(&q4("0.9,0.2,0.6,1")).unwrap();
        assert_eq!((d.a.clone(), d.b.clone(), d.c.clone()), (rat(2, 5), rat(1, 5), rat(1, 10)));
        assert_eq!(d.original(), q4("9/10,1/5,3/5,1"));
        let e = DeltaPoint::reduce(&q4("2/5,1/3,1/6,0")).unwrap();
        assert!(e.witness.is_identity());
        let c = DeltaPoint::reduce(&q4("1/2,1/2,1/2,1")).unwrap();
        assert_eq!(c.point(), q4("1/2,1/2,1/2,0"));
        assert!(c.witness.neg[3]);
        assert!(DeltaPoint::reduce(&q4("1/2,1/2,1/2,1/2")).is_err());
    }

    #[test]
    fn group_order() {
        let g = symmetry_group(4);
        assert_eq!(g.len(), 384);
        assert!(g[0].is_identity());
        assert_eq!(symmetry_group(3).len(), 48);
        for w in g.windows(2) {
            assert!(w[0].perm <= w[1].perm);
        }
    }

    #[test]
    fn dist_examples() {
        let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 6)).unwrap();
        let (d, arg) = dist_to_goal(&p, &QPoint::from_ints([1, 1, 1])).unwrap();
        assert_eq!(d, rat(3329, 900));
        let mut arg = arg;
        arg.sort();
        assert_eq!(arg, vec!["BR", "R", "UBR", "UR"]);
        let h = DeltaPoint::new(rat(1, 2), rat(1, 2), rat(1, 2)).unwrap();
        let hq = QPoint::new([rat(1, 2), rat(1, 2), rat(1, 2)]);
        assert_eq!(dist_to_goal(&h, &hq).unwrap().0, int(4));
        let o = DeltaPoint::new(int(0), int(0), int(0)).unwrap();
        assert_eq!(dist_to_goal(&o, &QPoint::from_ints([1, 1, 1])).unwrap().0, int(6));
        assert!(dist_to_goal(&o, &QPoint::from_ints([2, 1, 1])).is_err());
    }

    #[test]
    fn surface_examples() {
        let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 6)).unwrap();
        assert_eq!(dist_on_surface(&p, &p.point()).unwrap(), int(0));
        let q = q4("1/5,1/2,1/2,0");
        assert_eq!(dist_on_surface(&p, &q).unwrap(), p.point().dist2(&q));
        let h = DeltaPoint::new(rat(1, 2), rat(1, 2), rat(1, 2)).unwrap();
        assert_eq!(dist_on_surface(&h, &q4("1/2,1/2,1/2,1")).unwrap(), int(4));
        assert_eq!(surface_dist2(&q4("1,1,1,1"), &q4("0,0,0,0")).unwrap(), int(6));
    }

    #[test]
    fn dist_3cube_corner() {
        let p = QPoint::from_ints([0, 0, 0]);
        assert_eq!(surface_dist2_3cube(&p, &QPoint::from_ints([1, 1, 1])).unwrap(), int(5));
    }
}

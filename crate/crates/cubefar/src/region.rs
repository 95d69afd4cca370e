//! Classification polynomials and the region partitions of Δ0 and Δ.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cube::{goal_site, DeltaPoint};
use crate::exact::{int, outsphere, rat, Rat};
use crate::Error;

/// Names of the classification polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiName {
    Psi1,
    Psi2,
    Psi1L,
    Psi2L,
    Psi3L,
    Psi4L,
    Psi5L,
    Psi22,
    Psi32,
}

impl PsiName {
    pub fn arity(self) -> usize {
        match self {
            PsiName::Psi22 | PsiName::Psi32 => 3,
            _ => 2,
        }
    }
}

pub fn psi1(a: &Rat, c: &Rat) -> Rat {
    let (a2, c2) = (a * a, c * c);
    int(8) * (-a + c + &a2 + int(4) * a * c + &c2 - int(2) * &a2 * c - int(2) * &c2 * c)
}

pub fn psi2(a: &Rat, c: &Rat) -> Rat {
    let (a2, c2) = (a * a, c * c);
    int(4)
        * (int(-2) * a + int(8) * c + int(3) * &a2 - int(8) * a * c - int(5) * &c2 - &a2 * a
            + int(3) * &a2 * c
            - a * &c2
            + int(3) * &c2 * c)
}

pub fn psi1l(a: &Rat, c: &Rat) -> Rat {
    psi1(&(int(1) - a), c)
}

pub fn psi2l(a: &Rat, c: &Rat) -> Rat {
    psi2(&(int(1) - a), c)
}

pub fn psi3l(a: &Rat, c: &Rat) -> Rat {
    int(16) * c * (int(-1) + int(2) * a + a * a + c * c)
}

pub fn psi4l(a: &Rat, c: &Rat) -> Rat {
    let (a2, c2) = (a * a, c * c);
    int(4)
        * (a - &a2 * a - int(3) * c - int(2) * a * c + &a2 * c - int(2) * &c2 - a * &c2 + &c2 * c)
}

pub fn psi5l(a: &Rat, c: &Rat) -> Rat {
    let (a2, c2) = (a * a, c * c);
    int(8)
        * (a - &a2 - c - int(4) * a * c - int(2) * &a2 * c + int(3) * &c2 - int(2) * &c2 * c)
}

/// ψ22 as the expanded cubic (defined also at a = b).
pub fn psi22(a: &Rat, b: &Rat, c: &Rat) -> Rat {
    let c2 = c * c;
    int(3) - int(3) * a - int(3) * b - int(17) * c + int(3) * a * b + int(8) * a * c
        + int(8) * b * c
        + &c2
        - int(4) * a * b * c
        - int(2) * a * &c2
        - int(2) * b * &c2
        + int(4) * &c2 * c
}

/// ψ32 as the outsphere determinant of p_U, p_B, p_BD, p_RD, p_UR.
pub fn psi32(a: &Rat, b: &Rat, c: &Rat) -> Rat {
    let p = DeltaPoint { a: a.clone(), b: b.clone(), c: c.clone(), witness: identity4() };
    outsphere(&["U", "B", "BD", "RD", "UR"].map(|l| goal_site(&p, l)))
}

/// `outsphere(p_U, p_B, p_BD, p_RD, p_R)`; equals `4(a−b)·ψ22`.
pub fn psi22_determinant(a: &Rat, b: &Rat, c: &Rat) -> Rat {
    let p = DeltaPoint { a: a.clone(), b: b.clone(), c: c.clone(), witness: identity4() };
    outsphere(&["U", "B", "BD", "RD", "R"].map(|l| goal_site(&p, l)))
}

fn identity4() -> crate::cube::Isometry {
    crate::cube::Isometry::identity(4)
}

/// Evaluates a named polynomial.
pub fn eval_psi(name: PsiName, args: &[Rat]) -> Result<Rat, Error> {
    if args.len() != name.arity() {
        return Err(Error::Dimension { expected: name.arity(), got: args.len() });
    }
    let (x, y) = (&args[0], &args[1]);
    Ok(match name {
        PsiName::Psi1 => psi1(x, y),
        PsiName::Psi2 => psi2(x, y),
        PsiName::Psi1L => psi1l(x, y),
        PsiName::Psi2L => psi2l(x, y),
        PsiName::Psi3L => psi3l(x, y),
        PsiName::Psi4L => psi4l(x, y),
        PsiName::Psi5L => psi5l(x, y),
        PsiName::Psi22 => psi22(x, y, &args[2]),
        PsiName::Psi32 => psi32(x, y, &args[2]),
    })
}

fn in_delta0(a: &Rat, c: &Rat) -> Result<(), Error> {
    if !(Rat::zero() <= *c && c <= a && *a <= rat(1, 2)) {
        return Err(Error::OutOfDomain(format!("({a},{c}) is not in Δ0")));
    }
    Ok(())
}

/// Result of a planar classification: every region whose closed
/// conditions hold, and the classifiers that vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarClass {
    pub regions: Vec<u8>,
    pub zero: Vec<PsiName>,
}

impl PlanarClass {
    /// First region in order.
    pub fn primary(&self) -> u8 {
        self.regions[0]
    }
}

/// Δ1 / Δ2 / Δ3 on the right side of [q_U, q_D].
pub fn classify_planar_right(a: &Rat, c: &Rat) -> Result<PlanarClass, Error> {
    in_delta0(a, c)?;
    let (s1, s2) = (psi1(a, c), psi2(a, c));
    Ok(right_from_values(&s1, &s2))
}

fn right_from_values(s1: &Rat, s2: &Rat) -> PlanarClass {
    let mut regions = Vec::new();
    if !s1.is_negative() {
        regions.push(1);
    }
    if !s1.is_positive() && !s2.is_negative() {
        regions.push(2);
    }
    if !s2.is_positive() {
        regions.push(3);
    }
    let mut zero = Vec::new();
    if s1.is_zero() {
        zero.push(PsiName::Psi1);
    }
    if s2.is_zero() {
        zero.push(PsiName::Psi2);
    }
    PlanarClass { regions, zero }
}

/// Sign of `4a + 1 − √7` (threshold a = (−1+√7)/4), decided exactly.
pub fn cmp_a_threshold(a: &Rat) -> std::cmp::Ordering {
    // 4a+1 > 0 on Δ0, so compare squares.
    let t = int(4) * a + int(1);
    if t.is_negative() {
        return std::cmp::Ordering::Less;
    }
    (&t * &t).cmp(&int(7))
}

/// Sign of `c − (3 − √7)/4`, decided exactly: compare √7 with 3 − 4c.
pub fn cmp_c_threshold(c: &Rat) -> std::cmp::Ordering {
    let t = int(3) - int(4) * c;
    if t.is_negative() {
        return std::cmp::Ordering::Greater;
    }
    // c > (3−√7)/4  ⇔  √7 > t  ⇔  7 > t²
    int(7).cmp(&(&t * &t))
}

/// Δ1L … Δ5L on the left side of [q_U, q_D]. The Δ1L threshold is read as
/// `c ≥ (3−√7)/4`; thresholds break ties between overlapping sign regions.
pub fn classify_planar_left(a: &Rat, c: &Rat) -> Result<PlanarClass, Error> {
    use std::cmp::Ordering::*;
    in_delta0(a, c)?;
    let v = [psi1l(a, c), psi2l(a, c), psi3l(a, c), psi4l(a, c), psi5l(a, c)];
    let between = |lo: &Rat, hi: &Rat| !lo.is_positive() && !hi.is_negative();
    let a_cmp = cmp_a_threshold(a);
    let c_cmp = cmp_c_threshold(c);
    let sign_ok = [
        between(&v[4], &v[0]),
        between(&v[0], &v[1]),
        between(&v[1], &v[2]),
        between(&v[2], &v[3]),
        between(&v[3], &v[4]),
    ];
    let threshold_ok = [c_cmp != Less, a_cmp != Less, a_cmp != Less, c_cmp != Greater, a_cmp != Greater];
    let by_sign: Vec<u8> = (1..=5).filter(|k| sign_ok[*k as usize - 1]).collect();
    // The thresholds only separate overlapping sign regions; a point whose
    // sign regions all fail their threshold keeps them.
    let filtered: Vec<u8> = by_sign.iter().copied().filter(|k| threshold_ok[*k as usize - 1]).collect();
    let regions = if filtered.is_empty() { by_sign } else { filtered };
    let names = [PsiName::Psi1L, PsiName::Psi2L, PsiName::Psi3L, PsiName::Psi4L, PsiName::Psi5L];
    let zero = names.iter().zip(&v).filter(|(_, x)| x.is_zero()).map(|(n, _)| *n).collect();
    if regions.is_empty() {
        return Err(Error::Inconsistent(format!("({a},{c}) lies in no left region")));
    }
    Ok(PlanarClass { regions, zero })
}

/// The nine regions of Δ, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionTag {
    D11,
    D12,
    D21,
    D22A,
    D22B,
    D31,
    D32A,
    D32B,
    D33,
}

impl RegionTag {
    pub const ALL: [RegionTag; 9] = {
        use RegionTag::*;
        [D11, D12, D21, D22A, D22B, D31, D32A, D32B, D33]
    };

    /// `(i, j)` of Δ_{ij}.
    pub fn ij(self) -> (u8, u8) {
        use RegionTag::*;
        match self {
            D11 => (1, 1),
            D12 => (1, 2),
            D21 => (2, 1),
            D22A | D22B => (2, 2),
            D31 => (3, 1),
            D32A | D32B => (3, 2),
            D33 => (3, 3),
        }
    }

    pub fn name(self) -> &'static str {
        use RegionTag::*;
        match self {
            D11 => "D11",
            D12 => "D12",
            D21 => "D21",
            D22A => "D22A",
            D22B => "D22B",
            D31 => "D31",
            D32A => "D32A",
            D32B => "D32B",
            D33 => "D33",
        }
    }

    pub fn parse(s: &str) -> Option<RegionTag> {
        let t = s.trim().trim_start_matches(['D', 'Δ', 'd']);
        RegionTag::ALL.into_iter().find(|r| &r.name()[1..] == t)
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Boundary flags: which classifiers vanish at the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Psi1AcZero,
    Psi2AcZero,
    Psi1BcZero,
    Psi2BcZero,
    Psi22Zero,
    Psi32Zero,
}

/// Values of the classifiers at a point of Δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiValues {
    pub psi1_ac: Rat,
    pub psi2_ac: Rat,
    pub psi1_bc: Rat,
    pub psi2_bc: Rat,
    pub psi22: Rat,
    pub psi32: Rat,
}

/// Classification of a point of Δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    /// First member in canonical order.
    pub tag: RegionTag,
    /// Every region whose closed conditions hold at the point.
    pub members: Vec<RegionTag>,
    pub flags: Vec<Flag>,
    pub psi: PsiValues,
}

impl Region {
    pub fn is_interior(&self) -> bool {
        self.members.len() == 1
    }
}

/// Classifies `p ∈ Δ` into Δ11 … Δ33.
pub fn classify_delta(p: &DeltaPoint) -> Result<Region, Error> {
    let (a, b, c) = p.abc();
    let psi = PsiValues {
        psi1_ac: psi1(a, c),
        psi2_ac: psi2(a, c),
        psi1_bc: psi1(b, c),
        psi2_bc: psi2(b, c),
        psi22: psi22(a, b, c),
        psi32: psi32(a, b, c),
    };
    let ri = right_from_values(&psi.psi1_ac, &psi.psi2_ac).regions;
    let rj = right_from_values(&psi.psi1_bc, &psi.psi2_bc).regions;
    let mut members = Vec::new();
    for tag in RegionTag::ALL {
        let (i, j) = tag.ij();
        if !ri.contains(&i) || !rj.contains(&j) {
            continue;
        }
        let ok = match tag {
            RegionTag::D22A => !psi.psi22.is_negative(),
            RegionTag::D22B => !psi.psi22.is_positive(),
            RegionTag::D32A => !psi.psi32.is_negative(),
            RegionTag::D32B => !psi.psi32.is_positive(),
            _ => true,
        };
        if ok {
            members.push(tag);
        }
    }
    let empty_pair = ri.iter().any(|&i| i <= 2) && rj.contains(&3);
    if members.is_empty() {
        let why = if empty_pair { "sign pattern in Δ13/Δ23" } else { "no region" };
        return Err(Error::Inconsistent(format!("({p}) classifies into {why}")));
    }
    let mut flags = Vec::new();
    let z = |x: &Rat| x.is_zero();
    if z(&psi.psi1_ac) {
        flags.push(Flag::Psi1AcZero);
    }
    if z(&psi.psi2_ac) {
        flags.push(Flag::Psi2AcZero);
    }
    if z(&psi.psi1_bc) {
        flags.push(Flag::Psi1BcZero);
    }
    if z(&psi.psi2_bc) {
        flags.push(Flag::Psi2BcZero);
    }
    let in22 = members.iter().any(|t| t.ij() == (2, 2));
    let in32 = members.iter().any(|t| t.ij() == (3, 2));
    if in22 && z(&psi.psi22) {
        flags.push(Flag::Psi22Zero);
    }
    if in32 && z(&psi.psi32) {
        flags.push(Flag::Psi32Zero);
    }
    Ok(Region { tag: members[0], members, flags, psi })
}

/// Both sides of the ψ22 decomposition into ψ1 values: `(ψ22, rhs)`. The
/// right-hand side uses ψ1/8 for the per-plane classifier, which makes the
/// identity exact.
pub fn psi22_consistency(a: &Rat, b: &Rat, c: &Rat) -> Result<(Rat, Rat), Error> {
    let den = (a - b) * (int(1) - int(2) * c);
    if den.is_zero() {
        return Err(Error::Degenerate("a = b or c = 1/2".into()));
    }
    let k = |x: &Rat| int(3) - int(3) * x - int(8) * c + int(4) * x * c + int(2) * c * c;
    let rd = |x: &Rat| psi1(x, c) / int(8);
    let rhs = (-k(b) * rd(a) + k(a) * rd(b)) / den;
    Ok((psi22(a, b, c), rhs))
}

/// Both sides of the ψ32 combination formula: `(determinant, combination)`.
/// The combination is exact with ψ22 entering with a minus sign.
pub fn psi32_consistency(a: &Rat, b: &Rat, c: &Rat) -> Result<(Rat, Rat), Error> {
    let k = int(3) - int(3) * a - int(8) * c + int(4) * a * c + int(2) * c * c;
    if k.is_zero() {
        return Err(Error::Degenerate("singular ψ32 combination".into()));
    }
    let x22 = -psi22(a, b, c);
    let c2 = c * c;
    let t1 = -(int(4) * (a - b) * (int(4) - int(4) * a - int(6) * c + a * a + int(5) * &c2)) / &k
        * &x22;
    let inner = int(5) * c * (int(1) - c) * (int(3) - int(2) * c) * (int(1) + int(2) * c)
        - (int(3) - int(4) * c) * &x22;
    let t2 = (int(2) - a + c) * inner / (&k * &k) * psi2(a, c);
    Ok((psi32(a, b, c), t1 + t2))
}

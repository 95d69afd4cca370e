//! Exact rationals, points, and the determinant predicates.
//!
//! Every decision in the crate is taken on [`Rat`] values. Squared distances
//! are compared instead of distances, so no square root ever enters a
//! predicate.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// `n/d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a [`Rat`].
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Nearest `f64` (round to nearest, ties to even).
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational equal to the given finite `f64`.
pub fn from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Rounds `x` to the nearest multiple of `2^-bits` (ties away from zero).
pub fn snap_dyadic(x: f64, bits: u32) -> Rat {
    let scale = (bits as f64).exp2();
    let n = (x * scale).round();
    Rat::new(BigInt::from(n as i128), BigInt::one() << bits as usize)
}

/// Canonical text form: `num/den`, or `num` when the denominator is 1.
pub fn fmt_rat(x: &Rat) -> String {
    x.to_string()
}

/// Parses `num/den`, an integer, or a finite decimal such as `-0.125`.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let t = s.trim();
    let bad = |why: &str| Error::Parse(format!("{why} in rational {s:?}"));
    if t.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad("bad numerator"))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad("bad decimal"));
        }
        if ip.is_empty() && fp.is_empty() {
            return Err(bad("bad decimal"));
        }
        let digits = format!("{ip}{fp}");
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| bad("bad decimal"))?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    BigInt::from_str(t)
        .map(Rat::from_integer)
        .map_err(|_| bad("bad integer"))
}

/// Parses a comma-separated list of rationals. Errors name the failing position.
pub fn parse_coords(s: &str) -> Result<Vec<Rat>, Error> {
    s.split(',')
        .enumerate()
        .map(|(i, part)| {
            parse_rat(part).map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("component {}: {m}", i + 1)),
                other => other,
            })
        })
        .collect()
}

/// Point with `D` exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoint<const D: usize>(pub [Rat; D]);

impl<const D: usize> QPoint<D> {
    pub fn new(c: [Rat; D]) -> Self {
        QPoint(c)
    }

    pub fn from_ints(c: [i64; D]) -> Self {
        QPoint(std::array::from_fn(|i| int(c[i])))
    }

    pub fn origin() -> Self {
        QPoint(std::array::from_fn(|_| Rat::zero()))
    }

    /// Builds a point from a slice of the right length.
    pub fn from_slice(c: &[Rat]) -> Result<Self, Error> {
        if c.len() != D {
            return Err(Error::Dimension { expected: D, got: c.len() });
        }
        Ok(QPoint(std::array::from_fn(|i| c[i].clone())))
    }

    pub fn coords(&self) -> &[Rat; D] {
        &self.0
    }

    pub fn sub(&self, o: &Self) -> Self {
        QPoint(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn add(&self, o: &Self) -> Self {
        QPoint(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        QPoint(std::array::from_fn(|i| &self.0[i] * k))
    }

    pub fn dot(&self, o: &Self) -> Rat {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm2(&self) -> Rat {
        self.dot(self)
    }

    pub fn dist2(&self, o: &Self) -> Rat {
        self.0
            .iter()
            .zip(o.0.iter())
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }

    pub fn to_f64(&self) -> [f64; D] {
        std::array::from_fn(|i| to_f64(&self.0[i]))
    }

    /// Max-norm distance in `f64`.
    pub fn max_norm_f64(&self, o: &Self) -> f64 {
        (0..D)
            .map(|i| to_f64(&(&self.0[i] - &o.0[i])).abs())
            .fold(0.0, f64::max)
    }
}

impl<const D: usize> Index<usize> for QPoint<D> {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl<const D: usize> fmt::Display for QPoint<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rat).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl<const D: usize> fmt::Debug for QPoint<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl<const D: usize> FromStr for QPoint<D> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        QPoint::from_slice(&parse_coords(s)?)
    }
}

impl<const D: usize> serde::Serialize for QPoint<D> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(D))?;
        for c in &self.0 {
            seq.serialize_element(&fmt_rat(c))?;
        }
        seq.end()
    }
}

impl<'de, const D: usize> serde::Deserialize<'de> for QPoint<D> {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        let v: Vec<String> = serde::Deserialize::deserialize(d)?;
        let c = v
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        QPoint::from_slice(&c).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Rat`] as `"num/den"`; use with `#[serde(with = "rat_serde")]`.
pub mod rat_serde {
    use super::{fmt_rat, parse_rat, Rat};

    pub fn serialize<S: serde::Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(x))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s: String = serde::Deserialize::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Hyperplane `{x : <normal, x> = offset}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane<const D: usize> {
    pub normal: QPoint<D>,
    pub offset: Rat,
}

impl<const D: usize> Hyperplane<D> {
    pub fn new(normal: QPoint<D>, offset: Rat) -> Result<Self, Error> {
        if normal.0.iter().all(Zero::is_zero) {
            return Err(Error::Degenerate("hyperplane normal is zero".into()));
        }
        Ok(Hyperplane { normal, offset })
    }

    /// The hyperplane `x_axis = value`.
    pub fn axis(axis: usize, value: Rat) -> Self {
        let mut n = QPoint::origin();
        n.0[axis] = Rat::one();
        Hyperplane { normal: n, offset: value }
    }

    pub fn contains(&self, p: &QPoint<D>) -> bool {
        self.normal.dot(p) == self.offset
    }
}

/// Reflection across `h`.
pub fn reflect<const D: usize>(h: &Hyperplane<D>, p: &QPoint<D>) -> QPoint<D> {
    let k = (h.normal.dot(p) - &h.offset) * int(2) / h.normal.norm2();
    p.sub(&h.normal.scale(&k))
}

/// Three-way position of a query point relative to a circle or sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inside,
    On,
    Outside,
}

/// Exact determinant (fraction-free elimination is not needed at these sizes).
pub fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut d = Rat::one();
    for i in 0..n {
        let Some(piv) = (i..n).find(|&r| !m[r][i].is_zero()) else {
            return Rat::zero();
        };
        if piv != i {
            m.swap(i, piv);
            d = -d;
        }
        let p = m[i][i].clone();
        d *= &p;
        for r in i + 1..n {
            if m[r][i].is_zero() {
                continue;
            }
            let f = &m[r][i] / &p;
            for k in i..n {
                let t = &f * &m[i][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Solves `a x = b` exactly; `None` when `a` is singular.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = a.len();
    for i in 0..n {
        let piv = (i..n).find(|&r| !a[r][i].is_zero())?;
        a.swap(i, piv);
        b.swap(i, piv);
        let p = a[i][i].clone();
        for r in 0..n {
            if r == i || a[r][i].is_zero() {
                continue;
            }
            let f = &a[r][i] / &p;
            for k in i..n {
                let t = &f * &a[i][k];
                a[r][k] -= t;
            }
            let t = &f * &b[i];
            b[r] -= t;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn sign(x: &Rat) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn check_dims(d: usize, count: usize, expected: usize) -> Result<(), Error> {
    if !(2..=3).contains(&d) {
        return Err(Error::Dimension { expected: 3, got: d });
    }
    if count != expected {
        return Err(Error::Dimension { expected, got: count });
    }
    Ok(())
}

fn orient_det<const D: usize>(pts: &[QPoint<D>]) -> Rat {
    det(pts
        .iter()
        .map(|p| {
            let mut row = vec![Rat::one()];
            row.extend(p.0.iter().cloned());
            row
        })
        .collect())
}

/// Sign of the homogeneous orientation determinant of `D + 1` points (`D` = 2 or 3).
pub fn orient<const D: usize>(pts: &[QPoint<D>]) -> Result<i32, Error> {
    check_dims(D, pts.len(), D + 1)?;
    Ok(sign(&orient_det(pts)))
}

/// Lifted determinant with rows `(1, x, |x|²)`.
fn lifted_det<const D: usize>(pts: &[QPoint<D>]) -> Rat {
    det(pts
        .iter()
        .map(|p| {
            let mut row = vec![Rat::one()];
            row.extend(p.0.iter().cloned());
            row.push(p.norm2());
            row
        })
        .collect())
}

fn lifted_side<const D: usize>(base: &[QPoint<D>], q: &QPoint<D>) -> Result<Side, Error> {
    let o = orient_det(base);
    if o.is_zero() {
        return Err(Error::Degenerate("base points are affinely dependent".into()));
    }
    let mut all = base.to_vec();
    all.push(q.clone());
    // inside ⇔ orient · lifted < 0
    let s = -sign(&o) * sign(&lifted_det(&all));
    Ok(match s {
        1 => Side::Inside,
        0 => Side::On,
        _ => Side::Outside,
    })
}

/// Position of `q` relative to the circle through `p1, p2, p3`.
pub fn incircle_side(
    p1: &QPoint<2>,
    p2: &QPoint<2>,
    p3: &QPoint<2>,
    q: &QPoint<2>,
) -> Result<Side, Error> {
    lifted_side(&[p1.clone(), p2.clone(), p3.clone()], q)
}

/// Position of `q` relative to the sphere through `p1..p4`.
pub fn insphere_side(base: &[QPoint<3>; 4], q: &QPoint<3>) -> Result<Side, Error> {
    lifted_side(base, q)
}

/// The planar `outcircle` determinant with rows `(x, y, 1, x²+y²)`.
pub fn outcircle(pts: &[QPoint<2>; 4]) -> Rat {
    det(pts
        .iter()
        .map(|p| vec![p[0].clone(), p[1].clone(), Rat::one(), p.norm2()])
        .collect())
}

/// The spatial `outsphere` determinant with rows `(x, y, z, 1, x²+y²+z²)`.
pub fn outsphere(pts: &[QPoint<3>; 5]) -> Rat {
    det(pts
        .iter()
        .map(|p| {
            vec![p[0].clone(), p[1].clone(), p[2].clone(), Rat::one(), p.norm2()]
        })
        .collect())
}

/// Unique point equidistant from `D + 1` affinely independent points.
pub fn circumcenter<const D: usize>(pts: &[QPoint<D>]) -> Result<QPoint<D>, Error> {
    if pts.len() != D + 1 {
        return Err(Error::Dimension { expected: D + 1, got: pts.len() });
    }
    let p0 = &pts[0];
    let n0 = p0.norm2();
    let a = pts[1..]
        .iter()
        .map(|p| (0..D).map(|i| (&p[i] - &p0[i]) * int(2)).collect())
        .collect();
    let b = pts[1..].iter().map(|p| p.norm2() - &n0).collect();
    let x = solve(a, b)
        .ok_or_else(|| Error::Degenerate("circumcenter of affinely dependent points".into()))?;
    QPoint::from_slice(&x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: i64, y: i64) -> QPoint<2> {
        QPoint::from_ints([x, y])
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rat("0.9").unwrap(), rat(9, 10));
        assert_eq!(parse_rat(" 7 ").unwrap(), int(7));
        assert_eq!(parse_rat(".5").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1.2.3").is_err());
        let e = parse_coords("1,2/3,zz").unwrap_err().to_string();
        assert!(e.contains("component 3"), "{e}");
    }

    #[test]
    fn text_roundtrip() {
        let p: QPoint<4> = "2/5,1/3,1/6,0".parse().unwrap();
        assert_eq!(p.to_string(), "2/5,1/3,1/6,0");
        assert_eq!(fmt_rat(&rat(-4, 2)), "-2");
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orient(&[p2(0, 0), p2(1, 0), p2(0, 1)]).unwrap(), 1);
        assert_eq!(orient(&[p2(0, 0), p2(1, 1), p2(2, 2)]).unwrap(), 0);
        let t = [
            QPoint::from_ints([0, 0, 0]),
            QPoint::from_ints([1, 0, 0]),
            QPoint::from_ints([0, 1, 0]),
            QPoint::from_ints([0, 0, 1]),
        ];
        assert_eq!(orient(&t).unwrap(), 1);
        assert!(orient(&[p2(0, 0), p2(1, 0)]).is_err());
    }

    #[test]
    fn incircle_examples() {
        let (a, b, c) = (p2(0, 0), p2(1, 0), p2(0, 1));
        let half = QPoint::new([rat(1, 2), rat(1, 2)]);
        assert_eq!(incircle_side(&a, &b, &c, &half).unwrap(), Side::Inside);
        assert_eq!(incircle_side(&a, &b, &c, &p2(1, 1)).unwrap(), Side::On);
        assert_eq!(incircle_side(&a, &b, &c, &p2(2, 2)).unwrap(), Side::Outside);
        // orientation independence
        assert_eq!(incircle_side(&a, &c, &b, &half).unwrap(), Side::Inside);
        assert!(incircle_side(&a, &p2(1, 1), &p2(2, 2), &half).is_err());
    }

    #[test]
    fn insphere_examples() {
        let t = [
            QPoint::from_ints([0, 0, 0]),
            QPoint::from_ints([1, 0, 0]),
            QPoint::from_ints([0, 1, 0]),
            QPoint::from_ints([0, 0, 1]),
        ];
        let q = QPoint::new([rat(1, 4), rat(1, 4), rat(1, 4)]);
        assert_eq!(insphere_side(&t, &q).unwrap(), Side::Inside);
        assert_eq!(insphere_side(&t, &QPoint::from_ints([1, 1, 1])).unwrap(), Side::On);
        assert_eq!(insphere_side(&t, &QPoint::from_ints([2, 2, 2])).unwrap(), Side::Outside);
        let swapped = [t[1].clone(), t[0].clone(), t[2].clone(), t[3].clone()];
        assert_eq!(insphere_side(&swapped, &q).unwrap(), Side::Inside);
    }

    #[test]
    fn circumcenter_examples() {
        assert_eq!(circumcenter(&[p2(0, 0), p2(2, 0), p2(0, 2)]).unwrap(), p2(1, 1));
        let pts = [
            QPoint::from_ints([0, 0, 3]),
            QPoint::from_ints([0, 2, -1]),
            QPoint::from_ints([0, 0, -1]),
            QPoint::from_ints([2, 0, -1]),
        ];
        assert_eq!(circumcenter(&pts).unwrap(), QPoint::from_ints([1, 1, 1]));
        let t = [
            QPoint::from_ints([0, 0, 0]),
            QPoint::from_ints([1, 0, 0]),
            QPoint::from_ints([0, 1, 0]),
            QPoint::from_ints([0, 0, 1]),
        ];
        let h = rat(1, 2);
        assert_eq!(circumcenter(&t).unwrap(), QPoint::new([h.clone(), h.clone(), h]));
        assert!(circumcenter(&[p2(0, 0), p2(1, 1), p2(2, 2)]).is_err());
    }

    #[test]
    fn reflect_examples() {
        let h = Hyperplane::<4>::axis(0, rat(1, 2));
        let p = QPoint::new([rat(9, 10), rat(1, 5), rat(3, 5), int(0)]);
        assert_eq!(reflect(&h, &p), QPoint::new([rat(1, 10), rat(1, 5), rat(3, 5), int(0)]));
        let diag = Hyperplane::new(QPoint::from_ints([1, -1, 0, 0]), int(0)).unwrap();
        let q = QPoint::new([rat(2, 5), rat(1, 3), rat(1, 6), int(0)]);
        assert_eq!(reflect(&diag, &q), QPoint::new([rat(1, 3), rat(2, 5), rat(1, 6), int(0)]));
        let on = QPoint::new([rat(1, 3), rat(1, 3), int(5), int(1)]);
        assert_eq!(reflect(&diag, &on), on);
        assert!(Hyperplane::<2>::new(QPoint::origin(), int(1)).is_err());
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_dyadic(0.25, 48), rat(1, 4));
        let s = snap_dyadic(1.0 / 3.0, 48);
        assert!((to_f64(&s) - 1.0 / 3.0).abs() < 1e-14);
    }
}

//! Slopes on a torus, closed arcs on the projective circle and the GL(2,Z) action.
//!
//! A slope is a primitive pair `(p, q)` with `q >= 0`, standing for the class
//! `p*h + q*h*`. Finite slopes carry the affine coordinate `tau = -p/q`; the
//! vertical slope `(1, 0)` sits between `tau = +inf` and `tau = -inf`. The
//! circle is oriented by increasing `tau`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlopeError {
    #[error("zero vector is not a slope")]
    Zero,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),
    #[error("cannot parse slope {0:?}")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p/q` with the sign carried by the numerator; integers print without `/1`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Primitive class `p*h + q*h*` with `q >= 0`, and `p = 1` when `q = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    pub fn from_pair(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Slope, SlopeError> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(SlopeError::Zero);
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn vertical() -> Slope {
        Slope {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn from_tau(t: &Rational) -> Slope {
        Slope {
            p: -t.numer().clone(),
            q: t.denom().clone(),
        }
    }

    pub fn from_int_tau(t: i64) -> Slope {
        Slope::from_tau(&int(t))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_vertical(&self) -> bool {
        self.q.is_zero()
    }

    /// `None` for the vertical slope.
    pub fn tau(&self) -> Option<Rational> {
        if self.is_vertical() {
            None
        } else {
            Some(BigRational::new(-self.p.clone(), self.q.clone()))
        }
    }

    pub fn tau_string(&self) -> String {
        match self.tau() {
            None => "inf".to_string(),
            Some(t) => fmt_rational(&t),
        }
    }

    fn pos(&self) -> Pos {
        match self.tau() {
            None => Pos::Bot,
            Some(t) => Pos::Fin(t),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = SlopeError;
    fn from_str(s: &str) -> Result<Slope, SlopeError> {
        let err = || SlopeError::Parse(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(err)?;
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        Slope::from_pair(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Slope, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Position on the circle cut open at the vertical slope. `Bot` and `Top`
/// are the same point seen from either side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Pos {
    Bot,
    Fin(Rational),
    Top,
}

impl Pos {
    fn slope(&self) -> Slope {
        match self {
            Pos::Fin(t) => Slope::from_tau(t),
            _ => Slope::vertical(),
        }
    }
}

/// Cyclic comparison starting at the vertical slope.
pub fn circle_cmp(a: &Slope, b: &Slope) -> Ordering {
    a.pos().cmp(&b.pos())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlopeArc {
    Empty,
    Full,
    Point(Slope),
    /// Closed arc from `start` to `end` in the positive direction.
    Arc(Slope, Slope),
}

impl SlopeArc {
    /// Closed `tau`-interval `[lo, hi]`; a point when `lo == hi`.
    pub fn tau_interval(lo: &Rational, hi: &Rational) -> SlopeArc {
        match lo.cmp(hi) {
            Ordering::Equal => SlopeArc::Point(Slope::from_tau(lo)),
            Ordering::Less => SlopeArc::Arc(Slope::from_tau(lo), Slope::from_tau(hi)),
            Ordering::Greater => SlopeArc::Empty,
        }
    }

    pub fn arc(start: Slope, end: Slope) -> SlopeArc {
        if start == end {
            SlopeArc::Point(start)
        } else {
            SlopeArc::Arc(start, end)
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SlopeArc::Empty)
    }

    pub fn contains(&self, s: &Slope) -> bool {
        match self {
            SlopeArc::Empty => false,
            SlopeArc::Full => true,
            SlopeArc::Point(x) => x == s,
            SlopeArc::Arc(a, b) => {
                let (pa, pb, ps) = (a.pos(), b.pos(), s.pos());
                if pa < pb {
                    pa <= ps && ps <= pb
                } else {
                    ps >= pa || ps <= pb
                }
            }
        }
    }

    pub fn contains_vertical(&self) -> bool {
        self.contains(&Slope::vertical())
    }

    /// `Some((lo, hi))` when the arc is a bounded set of horizontal slopes.
    pub fn finite_bounds(&self) -> Option<(Rational, Rational)> {
        match self {
            SlopeArc::Point(s) => s.tau().map(|t| (t.clone(), t)),
            SlopeArc::Arc(a, b) if !self.contains_vertical() => Some((a.tau()?, b.tau()?)),
            _ => None,
        }
    }

    /// Frontier points (empty for `Full` and `Empty`).
    pub fn endpoints(&self) -> Vec<Slope> {
        match self {
            SlopeArc::Point(s) => vec![s.clone()],
            SlopeArc::Arc(a, b) => vec![a.clone(), b.clone()],
            _ => vec![],
        }
    }

    /// Piecewise linear intervals in the cut-open circle `[Bot, Top]`.
    fn pieces(&self) -> Vec<(Pos, Pos)> {
        match self {
            SlopeArc::Empty => vec![],
            SlopeArc::Full => vec![(Pos::Bot, Pos::Top)],
            SlopeArc::Point(s) => {
                let p = s.pos();
                vec![(p.clone(), p)]
            }
            SlopeArc::Arc(a, b) => {
                let (pa, pb) = (a.pos(), b.pos());
                if pa < pb {
                    vec![(pa, pb)]
                } else {
                    vec![(pa, Pos::Top), (Pos::Bot, pb)]
                }
            }
        }
    }

    /// Sample slope in the arc, preferring small denominators.
    pub fn simplest(&self) -> Option<Slope> {
        match self {
            SlopeArc::Empty => None,
            SlopeArc::Point(s) => Some(s.clone()),
            _ if self.contains_vertical() => Some(Slope::vertical()),
            SlopeArc::Arc(a, b) => Some(Slope::from_tau(&simplest_between(&a.tau()?, &b.tau()?))),
            SlopeArc::Full => Some(Slope::vertical()),
        }
    }
}

impl fmt::Display for SlopeArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeArc::Empty => write!(f, "empty"),
            SlopeArc::Full => write!(f, "full circle"),
            SlopeArc::Point(s) => write!(f, "{{{}}} (tau {})", s, s.tau_string()),
            SlopeArc::Arc(a, b) => write!(f, "[{} -> {}] (tau {} -> {})", a, b, a.tau_string(), b.tau_string()),
        }
    }
}

/// Rational in `[lo, hi]` with least denominator, then least `|numerator|`,
/// then positive.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi);
    let mut q = BigInt::one();
    loop {
        let qr = BigRational::from_integer(q.clone());
        let a = (lo * &qr).ceil().to_integer();
        let b = (hi * &qr).floor().to_integer();
        if a <= b {
            let kmin = if a.is_positive() {
                a.clone()
            } else if b.is_negative() {
                -b.clone()
            } else {
                BigInt::zero()
            };
            let kmax = a.abs().max(b.abs());
            let mut k = kmin;
            while k <= kmax {
                for c in [k.clone(), -k.clone()] {
                    if c >= a && c <= b && c.gcd(&q).is_one() {
                        return BigRational::new(c, q);
                    }
                }
                k += 1;
            }
        }
        q += 1;
    }
}

/// Disjoint union of arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeSet(pub Vec<SlopeArc>);

impl SlopeSet {
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|a| a.is_empty())
    }

    pub fn contains(&self, s: &Slope) -> bool {
        self.0.iter().any(|a| a.contains(s))
    }
}

pub fn arc_intersect(a: &SlopeArc, b: &SlopeArc) -> SlopeSet {
    let mut parts: Vec<(Pos, Pos)> = vec![];
    for (a0, a1) in a.pieces() {
        for (b0, b1) in b.pieces() {
            let lo = a0.clone().max(b0.clone());
            let hi = a1.clone().min(b1);
            if lo <= hi {
                parts.push((lo, hi));
            }
        }
    }
    parts.sort();
    parts.dedup();
    // a vertical point piece at the top is the same as one at the bottom
    for p in parts.iter_mut() {
        if p.0 == Pos::Top {
            *p = (Pos::Bot, Pos::Bot);
        }
    }
    parts.sort();
    parts.dedup();
    if parts.len() == 1 && parts[0] == (Pos::Bot, Pos::Top) {
        return SlopeSet(vec![SlopeArc::Full]);
    }
    // join a piece ending at Top with one starting at Bot
    let tail = parts.iter().position(|p| p.1 == Pos::Top);
    let head = parts.iter().position(|p| p.0 == Pos::Bot);
    let mut arcs = vec![];
    match (tail, head) {
        (Some(t), Some(h)) if t != h => {
            let start = parts[t].0.slope();
            let end = parts[h].1.slope();
            arcs.push(SlopeArc::arc(start, end));
            for (i, p) in parts.iter().enumerate() {
                if i != t && i != h {
                    arcs.push(SlopeArc::arc(p.0.slope(), p.1.slope()));
                }
            }
        }
        _ => {
            for p in &parts {
                arcs.push(SlopeArc::arc(p.0.slope(), p.1.slope()));
            }
        }
    }
    SlopeSet(arcs)
}

/// Integer matrix `[[a, b], [c, d]]` acting on column vectors `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GluingMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl GluingMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> GluingMatrix {
        GluingMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> GluingMatrix {
        GluingMatrix { a, b, c, d }
    }

    pub fn identity() -> GluingMatrix {
        GluingMatrix::new(1, 0, 0, 1)
    }

    /// `(p, q) -> (p + k q, q)`.
    pub fn shear(k: &BigInt) -> GluingMatrix {
        GluingMatrix::from_big(BigInt::one(), k.clone(), BigInt::zero(), BigInt::one())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn check(&self) -> Result<(), SlopeError> {
        let det = self.det();
        if det.abs().is_one() {
            Ok(())
        } else {
            Err(SlopeError::NotUnimodular(det))
        }
    }

    pub fn mul(&self, o: &GluingMatrix) -> GluingMatrix {
        GluingMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> GluingMatrix {
        let det = self.det();
        GluingMatrix {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        }
    }

    pub fn apply(&self, p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
        (&self.a * p + &self.b * q, &self.c * p + &self.d * q)
    }

    pub fn rows(&self) -> [[BigInt; 2]; 2] {
        [[self.a.clone(), self.b.clone()], [self.c.clone(), self.d.clone()]]
    }
}

impl fmt::Display for GluingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn act(g: &GluingMatrix, s: &Slope) -> Result<Slope, SlopeError> {
    g.check()?;
    let (p, q) = g.apply(&s.p, &s.q);
    Slope::from_pair(p, q)
}

pub fn act_arc(g: &GluingMatrix, arc: &SlopeArc) -> Result<SlopeArc, SlopeError> {
    g.check()?;
    let img = |s: &Slope| act(g, s);
    Ok(match arc {
        SlopeArc::Empty => SlopeArc::Empty,
        SlopeArc::Full => SlopeArc::Full,
        SlopeArc::Point(s) => SlopeArc::Point(img(s)?),
        SlopeArc::Arc(a, b) => {
            if g.det().is_positive() {
                SlopeArc::Arc(img(a)?, img(b)?)
            } else {
                SlopeArc::Arc(img(b)?, img(a)?)
            }
        }
    })
}

pub fn delta(s1: &Slope, s2: &Slope) -> BigInt {
    (&s1.p * &s2.q - &s2.p * &s1.q).abs()
}

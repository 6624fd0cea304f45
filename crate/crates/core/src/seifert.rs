//! Detected slopes on one boundary torus of a Seifert piece, given constraint
//! arcs on the other boundary tori.
//!
//! Everything here works in the piece's tau-frames with the section
//! obstruction absorbed into the target torus, so the Euler relation reads
//! `sum(gamma_i) + sum(tau_j) = 0` for a horizontal tuple.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::slope::{act, act_arc, fmt_rational, GluingMatrix, Rational, Slope, SlopeArc};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("cone invariant {0} is not in (0, 1)")]
    BadCone(String),
    #[error("piece needs at least one boundary torus")]
    NoBoundary,
    #[error("orientable base with crosscaps or non-orientable base without")]
    BadBase,
    #[error("expected {expected} constraint arcs, got {got}")]
    ArcCount { expected: usize, got: usize },
    #[error("constraint {0} is empty")]
    EmptyArc(usize),
    #[error("strong index {0} out of range")]
    StrongIndex(usize),
    #[error("strong constraint {0} contains the fibre slope or is a single point")]
    StrongArc(usize),
    #[error("core interval needs bounded horizontal constraints and n + r >= 3")]
    CorePrecondition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertPiece {
    orientable: bool,
    crosscaps: u32,
    gammas: Vec<Rational>,
    boundary_count: usize,
}

impl SeifertPiece {
    pub fn new(
        orientable: bool,
        crosscaps: u32,
        gammas: Vec<Rational>,
        boundary_count: usize,
    ) -> Result<SeifertPiece, DetectError> {
        for g in &gammas {
            if !g.is_positive() || *g >= BigRational::one() {
                return Err(DetectError::BadCone(fmt_rational(g)));
            }
        }
        if boundary_count == 0 {
            return Err(DetectError::NoBoundary);
        }
        if orientable != (crosscaps == 0) {
            return Err(DetectError::BadBase);
        }
        Ok(SeifertPiece {
            orientable,
            crosscaps,
            gammas,
            boundary_count,
        })
    }

    /// Orientable planar base with the given cone invariants.
    pub fn planar(gammas: Vec<Rational>, boundary_count: usize) -> Result<SeifertPiece, DetectError> {
        SeifertPiece::new(true, 0, gammas, boundary_count)
    }

    /// The twisted I-bundle over the Klein bottle, fibred over the Mobius band.
    pub fn n2() -> SeifertPiece {
        SeifertPiece {
            orientable: false,
            crosscaps: 1,
            gammas: vec![],
            boundary_count: 1,
        }
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn crosscaps(&self) -> u32 {
        self.crosscaps
    }

    pub fn gammas(&self) -> &[Rational] {
        &self.gammas
    }

    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    pub fn r(&self) -> usize {
        self.boundary_count
    }

    pub fn is_n2(&self) -> bool {
        !self.orientable && self.crosscaps == 1 && self.gammas.is_empty() && self.boundary_count == 1
    }

    pub fn is_torus_x_interval(&self) -> bool {
        self.orientable && self.gammas.is_empty() && self.boundary_count == 2
    }

    pub fn is_solid_torus(&self) -> bool {
        self.orientable && self.boundary_count == 1 && self.gammas.len() <= 1
    }

    pub fn gamma_sum(&self) -> Rational {
        self.gammas.iter().fold(BigRational::zero(), |a, g| a + g)
    }

    /// Same piece with reversed orientation: `gamma -> 1 - gamma`.
    pub fn mirror(&self) -> SeifertPiece {
        SeifertPiece {
            gammas: self.gammas.iter().map(|g| BigRational::one() - g).collect(),
            ..self.clone()
        }
    }

    fn lcm_orders(&self) -> BigInt {
        self.gammas.iter().fold(BigInt::one(), |l, g| l.lcm(g.denom()))
    }
}

/// Constraint arcs on boundary tori `0..r-1`; the target is the last torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintFamily {
    arcs: Vec<SlopeArc>,
    strong: BTreeSet<usize>,
}

impl ConstraintFamily {
    pub fn new(arcs: Vec<SlopeArc>, strong: BTreeSet<usize>) -> Result<ConstraintFamily, DetectError> {
        for (j, a) in arcs.iter().enumerate() {
            if a.is_empty() {
                return Err(DetectError::EmptyArc(j));
            }
        }
        for &j in &strong {
            let a = arcs.get(j).ok_or(DetectError::StrongIndex(j))?;
            if a.contains_vertical() || matches!(a, SlopeArc::Point(_)) {
                return Err(DetectError::StrongArc(j));
            }
        }
        Ok(ConstraintFamily { arcs, strong })
    }

    pub fn plain(arcs: Vec<SlopeArc>) -> Result<ConstraintFamily, DetectError> {
        ConstraintFamily::new(arcs, BTreeSet::new())
    }

    pub fn points(slopes: &[Slope]) -> ConstraintFamily {
        ConstraintFamily {
            arcs: slopes.iter().cloned().map(SlopeArc::Point).collect(),
            strong: BTreeSet::new(),
        }
    }

    pub fn empty() -> ConstraintFamily {
        ConstraintFamily {
            arcs: vec![],
            strong: BTreeSet::new(),
        }
    }

    pub fn arcs(&self) -> &[SlopeArc] {
        &self.arcs
    }

    pub fn strong(&self) -> &BTreeSet<usize> {
        &self.strong
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// `[eta_j, zeta_j]` for every arc, when all are bounded and horizontal.
    pub fn bounds(&self) -> Option<Vec<(Rational, Rational)>> {
        self.arcs.iter().map(|a| a.finite_bounds()).collect()
    }

    fn with_arc(&self, j: usize, arc: SlopeArc) -> ConstraintFamily {
        let mut c = self.clone();
        c.arcs[j] = arc;
        c
    }

    /// Image under `tau -> -tau`.
    pub fn mirror(&self) -> ConstraintFamily {
        let flip = GluingMatrix::new(-1, 0, 0, 1);
        ConstraintFamily {
            arcs: self
                .arcs
                .iter()
                .map(|a| act_arc(&flip, a).expect("unimodular"))
                .collect(),
            strong: self.strong.clone(),
        }
    }
}

pub fn v_count(c: &ConstraintFamily) -> usize {
    c.arcs.iter().filter(|a| a.contains_vertical()).count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauStats {
    pub r_1: usize,
    pub s_0: usize,
    pub i_0: usize,
    pub b_0: BigInt,
    pub m_0: BigInt,
    pub m_1: BigInt,
}

pub fn floor(t: &Rational) -> BigInt {
    t.floor().to_integer()
}

pub fn frac(t: &Rational) -> Rational {
    t - t.floor()
}

pub fn tau_stats(n: usize, r: usize, taus: &[Rational], strong: &BTreeSet<usize>) -> TauStats {
    let mut r_1 = 0;
    let mut s_0 = 0;
    let mut i_0 = 0;
    let mut b_0 = BigInt::zero();
    for (j, t) in taus.iter().enumerate() {
        b_0 -= floor(t);
        if !t.is_integer() {
            r_1 += 1;
        } else if strong.contains(&j) {
            i_0 += 1;
        } else {
            s_0 += 1;
        }
    }
    let m_0 = &b_0 + BigInt::from(i_0) - BigInt::from(n + r) + 2;
    let m_1 = &b_0 + BigInt::from(s_0) - 1;
    TauStats {
        r_1,
        s_0,
        i_0,
        b_0,
        m_0,
        m_1,
    }
}

/// `(c_min, c_max)`: the union of `[m_0, m_1]` over constraint tuples with
/// `i_0 = 0`.
pub fn core_interval(piece: &SeifertPiece, c: &ConstraintFamily) -> Result<(BigInt, BigInt), DetectError> {
    let bounds = c.bounds().ok_or(DetectError::CorePrecondition)?;
    if piece.n() + piece.r() < 3 || c.len() + 1 != piece.r() {
        return Err(DetectError::CorePrecondition);
    }
    Ok(core_from_bounds(piece.n(), piece.r(), &bounds, &c.strong))
}

fn core_from_bounds(n: usize, r: usize, bounds: &[(Rational, Rational)], strong: &BTreeSet<usize>) -> (BigInt, BigInt) {
    let mut i_1 = 0usize;
    let mut s_1 = 0usize;
    let mut zeta_floor = BigInt::zero();
    let mut eta_floor = BigInt::zero();
    for (j, (eta, zeta)) in bounds.iter().enumerate() {
        zeta_floor += floor(zeta);
        eta_floor += floor(eta);
        if strong.contains(&j) {
            if zeta.is_integer() {
                i_1 += 1;
            }
        } else if eta.is_integer() {
            s_1 += 1;
        }
    }
    let c_min = BigInt::from(i_1) - zeta_floor - BigInt::from(n + r) + 2;
    let c_max = BigInt::from(s_1) - 1 - eta_floor;
    (c_min, c_max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Low,
    High,
}

/// Coprime `0 < A < N` and a placement of `(A, N-A, 1, ..., 1)` over the
/// slots `cones ++ constraints ++ [target]`. For the high side the slots
/// refer to the mirrored piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JnCertificate {
    pub side: Side,
    #[serde(serialize_with = "ser_big")]
    pub n: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub a: BigInt,
    #[serde(serialize_with = "ser_big_vec")]
    pub values: Vec<BigInt>,
    #[serde(serialize_with = "ser_rat")]
    pub endpoint: Rational,
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_rat<S: serde::Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(v))
}

/// Lower bound on `value / N` in one slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotBound {
    Free,
    Strict(Rational),
    Weak(Rational),
    Impossible,
}

impl SlotBound {
    pub fn admits(&self, x: &Rational) -> bool {
        match self {
            SlotBound::Free => true,
            SlotBound::Strict(l) => x > l,
            SlotBound::Weak(l) => x >= l,
            SlotBound::Impossible => false,
        }
    }

    /// Least integer `v` with `v / N` admitted.
    fn least(&self, n: &BigInt) -> BigInt {
        let nr = BigRational::from_integer(n.clone());
        match self {
            SlotBound::Free | SlotBound::Impossible => BigInt::one(),
            SlotBound::Strict(l) => (l * &nr).floor().to_integer() + 1,
            SlotBound::Weak(l) => (l * &nr).ceil().to_integer(),
        }
    }
}

/// Slot bounds at the upper endpoints `zeta_j`: cones first, then constraints.
pub fn low_slot_bounds(piece: &SeifertPiece, zetas: &[Rational], strong: &BTreeSet<usize>) -> Vec<SlotBound> {
    let one = BigRational::one();
    let mut out: Vec<SlotBound> = piece.gammas.iter().map(|g| SlotBound::Strict(&one - g)).collect();
    for (j, z) in zetas.iter().enumerate() {
        out.push(match (strong.contains(&j), z.is_integer()) {
            (true, true) => SlotBound::Free,
            (true, false) => SlotBound::Strict(&one - frac(z)),
            (false, true) => SlotBound::Impossible,
            (false, false) => SlotBound::Weak(&one - frac(z)),
        });
    }
    out
}

pub fn default_nmax(piece: &SeifertPiece, c: &ConstraintFamily) -> BigInt {
    let mut den = BigInt::one();
    for a in &c.arcs {
        for s in a.endpoints() {
            if let Some(t) = s.tau() {
                den = den.max(t.denom().clone());
            }
        }
    }
    BigInt::from(2) * piece.lcm_orders() * den
}

struct Candidate {
    eta: Rational,
    n: BigInt,
    a: BigInt,
    pattern: usize,
    sa: usize,
    sb: usize,
}

/// Minimal `c_min - C/N` over certificates with `N <= nmax`, given the
/// non-target slot bounds. Ties go to the least `(N, A, pattern)`.
pub fn search_low(
    bounds: &[SlotBound],
    c_min: &BigInt,
    nmax: &BigInt,
) -> Option<(Rational, BigInt, BigInt, Vec<BigInt>)> {
    if bounds.iter().any(|b| *b == SlotBound::Impossible) {
        return None;
    }
    let k = bounds.len() + 1;
    let target = k - 1;
    let cmin = BigRational::from_integer(c_min.clone());
    let mut best: Option<Candidate> = None;
    for sa in 0..k {
        for sb in 0..k {
            if sa == sb {
                continue;
            }
            let pattern = sa * k + sb;
            // slots holding 1/N, other than the target
            let mut n_hi = nmax.clone();
            let mut bounded = false;
            for (s, b) in bounds.iter().enumerate() {
                if s == sa || s == sb {
                    continue;
                }
                let cap = match b {
                    SlotBound::Strict(l) => Some((BigRational::one() / l).ceil().to_integer() - 1),
                    SlotBound::Weak(l) => Some((BigRational::one() / l).floor().to_integer()),
                    _ => None,
                };
                if let Some(cap) = cap {
                    bounded = true;
                    n_hi = n_hi.min(cap);
                }
            }
            let target_is_one = target != sa && target != sb;
            let mut n = BigInt::from(2);
            while n <= n_hi {
                let mut lo = BigInt::one();
                let mut hi: BigInt = &n - 1;
                if sa != target {
                    lo = lo.max(bounds[sa].least(&n));
                }
                if sb != target {
                    hi = hi.min(&n - bounds[sb].least(&n));
                }
                let pick = if lo > hi {
                    None
                } else if sa == target {
                    first_coprime(&hi, &lo, &n, false)
                } else {
                    first_coprime(&lo, &hi, &n, true)
                };
                if let Some(a) = pick {
                    let c = if sa == target {
                        a.clone()
                    } else if sb == target {
                        &n - &a
                    } else {
                        BigInt::one()
                    };
                    let eta = &cmin - BigRational::new(c, n.clone());
                    let cand = Candidate {
                        eta,
                        n: n.clone(),
                        a,
                        pattern,
                        sa,
                        sb,
                    };
                    let better = match &best {
                        None => true,
                        Some(b) => (&cand.eta, &cand.n, &cand.a, cand.pattern) < (&b.eta, &b.n, &b.a, b.pattern),
                    };
                    if better {
                        best = Some(cand);
                    }
                    if target_is_one && !bounded {
                        break;
                    }
                }
                n += 1;
            }
        }
    }
    best.map(|b| {
        let mut values = vec![BigInt::one(); k];
        values[b.sa] = b.a.clone();
        values[b.sb] = &b.n - &b.a;
        (b.eta, b.n, b.a, values)
    })
}

fn first_coprime(from: &BigInt, to: &BigInt, n: &BigInt, up: bool) -> Option<BigInt> {
    let mut a = from.clone();
    loop {
        if up && a > *to || !up && a < *to {
            return None;
        }
        if a.gcd(n).is_one() {
            return Some(a);
        }
        if up {
            a += 1;
        } else {
            a -= 1;
        }
    }
}

pub fn jn_refine_low(
    piece: &SeifertPiece,
    c: &ConstraintFamily,
    nmax: &BigInt,
) -> Result<Option<(Rational, JnCertificate)>, DetectError> {
    let (c_min, _) = core_interval(piece, c)?;
    let bounds = c.bounds().ok_or(DetectError::CorePrecondition)?;
    let zetas: Vec<Rational> = bounds.iter().map(|b| b.1.clone()).collect();
    let slots = low_slot_bounds(piece, &zetas, &c.strong);
    Ok(search_low(&slots, &c_min, nmax).map(|(eta, n, a, values)| {
        let cert = JnCertificate {
            side: Side::Low,
            n,
            a,
            values,
            endpoint: eta.clone(),
        };
        (eta, cert)
    }))
}

pub fn jn_refine_high(
    piece: &SeifertPiece,
    c: &ConstraintFamily,
    nmax: &BigInt,
) -> Result<Option<(Rational, JnCertificate)>, DetectError> {
    let low = jn_refine_low(&piece.mirror(), &c.mirror(), nmax)?;
    let shift = BigRational::from_integer(BigInt::from(piece.n()));
    Ok(low.map(|(eta, mut cert)| {
        let zeta = -eta - shift;
        cert.side = Side::High;
        cert.endpoint = zeta.clone();
        (zeta, cert)
    }))
}

/// Re-checks the three realizability conditions of a certificate.
pub fn certificate_holds(piece: &SeifertPiece, c: &ConstraintFamily, cert: &JnCertificate) -> bool {
    let (piece, c, endpoint) = match cert.side {
        Side::Low => (piece.clone(), c.clone(), cert.endpoint.clone()),
        Side::High => {
            let n = BigRational::from_integer(BigInt::from(piece.n()));
            (piece.mirror(), c.mirror(), -&cert.endpoint - n)
        }
    };
    let Ok((c_min, _)) = core_interval(&piece, &c) else {
        return false;
    };
    let k = piece.n() + c.len() + 1;
    let n = &cert.n;
    let a = &cert.a;
    if cert.values.len() != k || *n < BigInt::from(2) || !a.is_positive() || a >= n || !a.gcd(n).is_one() {
        return false;
    }
    let mut want = vec![BigInt::one(); k];
    want[0] = a.clone();
    want[1] = n - a;
    want.sort();
    let mut got = cert.values.clone();
    got.sort();
    if got != want {
        return false;
    }
    let one = BigRational::one();
    let part = |v: &BigInt| BigRational::new(v.clone(), n.clone());
    for (i, g) in piece.gammas.iter().enumerate() {
        if !(&one - part(&cert.values[i]) < *g) {
            return false;
        }
    }
    let bounds = c.bounds().expect("core interval succeeded");
    for (j, (_, zeta)) in bounds.iter().enumerate() {
        let lhs = &one - part(&cert.values[piece.n() + j]);
        let f = frac(zeta);
        let ok = if c.strong.contains(&j) {
            zeta.is_integer() || lhs < f
        } else {
            !zeta.is_integer() && lhs <= f
        };
        if !ok {
            return false;
        }
    }
    let cmin = BigRational::from_integer(c_min);
    &one - part(&cert.values[k - 1]) == endpoint - (cmin - one.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum StrongStatus {
    Strong,
    NotStrong,
    Indeterminate,
}

impl fmt::Display for StrongStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StrongStatus::Strong => "strong",
            StrongStatus::NotStrong => "not strong",
            StrongStatus::Indeterminate => "indeterminate",
        };
        write!(f, "{}", s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exception {
    pub slope: Slope,
    pub status: StrongStatus,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectionResult {
    pub detected: SlopeArc,
    /// Slopes of `detected` whose status is not `Strong`.
    pub exceptions: Vec<Exception>,
    /// Core interval and refinements, in the piece frame, when computed.
    pub core: Option<(BigInt, BigInt)>,
    pub low: Option<JnCertificate>,
    pub high: Option<JnCertificate>,
    pub nmax: BigInt,
}

impl DetectionResult {
    fn simple(detected: SlopeArc, exceptions: Vec<Exception>, nmax: BigInt) -> DetectionResult {
        DetectionResult {
            detected,
            exceptions,
            core: None,
            low: None,
            high: None,
            nmax,
        }
    }

    pub fn contains(&self, s: &Slope) -> bool {
        self.detected.contains(s)
    }

    /// `None` outside the detected set.
    pub fn strong_status(&self, s: &Slope) -> Option<StrongStatus> {
        if !self.detected.contains(s) {
            return None;
        }
        Some(
            self.exceptions
                .iter()
                .find(|e| e.slope == *s)
                .map_or(StrongStatus::Strong, |e| e.status),
        )
    }

    pub fn is_point(&self) -> bool {
        matches!(self.detected, SlopeArc::Point(_))
    }

    pub fn set_status(&mut self, s: &Slope, status: StrongStatus, reason: &str) {
        self.exceptions.retain(|e| e.slope != *s);
        if status != StrongStatus::Strong {
            self.exceptions.push(Exception {
                slope: s.clone(),
                status,
                reason: reason.to_string(),
            });
        }
    }

    /// Image under a change of basis of the target torus.
    pub fn reframe(&self, g: &GluingMatrix) -> DetectionResult {
        DetectionResult {
            detected: act_arc(g, &self.detected).expect("unimodular frame"),
            exceptions: self
                .exceptions
                .iter()
                .map(|e| Exception {
                    slope: act(g, &e.slope).expect("unimodular frame"),
                    ..e.clone()
                })
                .collect(),
            ..self.clone()
        }
    }
}

fn not_strong(s: Slope, reason: &str) -> Exception {
    Exception {
        slope: s,
        status: StrongStatus::NotStrong,
        reason: reason.to_string(),
    }
}

fn indeterminate(s: Slope, reason: &str) -> Exception {
    Exception {
        slope: s,
        status: StrongStatus::Indeterminate,
        reason: reason.to_string(),
    }
}

/// Bounded horizontal answer: `(L, R, core, low, high)`.
struct Ends {
    left: Rational,
    right: Rational,
    core: (BigInt, BigInt),
    low: Option<JnCertificate>,
    high: Option<JnCertificate>,
}

fn horizontal_ends(piece: &SeifertPiece, c: &ConstraintFamily, nmax: &BigInt) -> Result<Ends, DetectError> {
    let core = core_interval(piece, c)?;
    let low = jn_refine_low(piece, c, nmax)?;
    let high = jn_refine_high(piece, c, nmax)?;
    let left = low
        .as_ref()
        .map_or_else(|| BigRational::from_integer(core.0.clone()), |l| l.0.clone());
    let right = high
        .as_ref()
        .map_or_else(|| BigRational::from_integer(core.1.clone()), |h| h.0.clone());
    Ok(Ends {
        left,
        right,
        core,
        low: low.map(|l| l.1),
        high: high.map(|h| h.1),
    })
}

pub fn detect_relative(piece: &SeifertPiece, c: &ConstraintFamily) -> Result<DetectionResult, DetectError> {
    let nmax = default_nmax(piece, c);
    detect_relative_with(piece, c, &nmax)
}

pub fn detect_relative_with(
    piece: &SeifertPiece,
    c: &ConstraintFamily,
    nmax: &BigInt,
) -> Result<DetectionResult, DetectError> {
    if c.len() + 1 != piece.r() {
        return Err(DetectError::ArcCount {
            expected: piece.r() - 1,
            got: c.len(),
        });
    }
    let v = v_count(c);
    let h = Slope::vertical();
    let nmax = nmax.clone();
    if !piece.orientable {
        return Ok(if v == 0 {
            let ex = if piece.is_n2() {
                vec![]
            } else {
                vec![not_strong(h.clone(), "Q-base piece other than N_2")]
            };
            DetectionResult::simple(SlopeArc::Point(h), ex, nmax)
        } else {
            DetectionResult::simple(SlopeArc::Full, vec![not_strong(h, "fibre slope over Q-base")], nmax)
        });
    }
    if piece.is_solid_torus() {
        let meridian = Slope::from_tau(&-piece.gamma_sum());
        return Ok(DetectionResult::simple(SlopeArc::Point(meridian), vec![], nmax));
    }
    if piece.is_torus_x_interval() {
        let flip = GluingMatrix::new(-1, 0, 0, 1);
        let d = act_arc(&flip, &c.arcs[0]).expect("unimodular");
        return Ok(DetectionResult::simple(d, vec![], nmax));
    }
    if v >= 2 {
        return Ok(DetectionResult::simple(
            SlopeArc::Full,
            vec![not_strong(h, "fibre slope, v >= 2")],
            nmax,
        ));
    }
    if v == 0 {
        let e = horizontal_ends(piece, c, &nmax)?;
        let detected = SlopeArc::tau_interval(&e.left, &e.right);
        let exceptions = match &detected {
            SlopeArc::Arc(a, b) => vec![
                not_strong(a.clone(), "endpoint of a non-degenerate interval"),
                not_strong(b.clone(), "endpoint of a non-degenerate interval"),
            ],
            _ => vec![],
        };
        return Ok(DetectionResult {
            detected,
            exceptions,
            core: Some(e.core),
            low: e.low,
            high: e.high,
            nmax,
        });
    }
    // v == 1: one constraint meets the fibre slope
    let j0 = c.arcs.iter().position(|a| a.contains_vertical()).expect("v = 1");
    let (minus, plus) = match &c.arcs[j0] {
        SlopeArc::Full => {
            return Ok(DetectionResult::simple(
                SlopeArc::Full,
                vec![not_strong(h, "fibre slope, v = 1")],
                nmax,
            ))
        }
        SlopeArc::Point(_) => {
            let ex = vec![not_strong(h.clone(), "fibre slope, v = 1")];
            return Ok(DetectionResult::simple(SlopeArc::Point(h), ex, nmax));
        }
        SlopeArc::Arc(s, e) if s.is_vertical() => (e.tau(), None),
        SlopeArc::Arc(s, e) if e.is_vertical() => (None, s.tau()),
        SlopeArc::Arc(s, e) => (e.tau(), s.tau()),
        SlopeArc::Empty => unreachable!("constraints are non-empty"),
    };
    // (-inf, a] truncates to [a - K, a]; only the left end L matters
    let left = match &minus {
        Some(a) => Some(horizontal_ends(piece, &c.with_arc(j0, SlopeArc::Point(Slope::from_tau(a))), &nmax)?.left),
        None => None,
    };
    let right = match &plus {
        Some(b) => Some(horizontal_ends(piece, &c.with_arc(j0, SlopeArc::Point(Slope::from_tau(b))), &nmax)?.right),
        None => None,
    };
    let detected = match (&left, &right) {
        (Some(l), Some(r)) if r >= l => SlopeArc::Full,
        (Some(l), Some(r)) => SlopeArc::Arc(Slope::from_tau(l), Slope::from_tau(r)),
        (Some(l), None) => SlopeArc::Arc(Slope::from_tau(l), h.clone()),
        (None, Some(r)) => SlopeArc::Arc(h.clone(), Slope::from_tau(r)),
        (None, None) => unreachable!("arc through the fibre slope has a finite end"),
    };
    let mut exceptions = vec![not_strong(h, "fibre slope, v = 1")];
    if detected != SlopeArc::Full {
        for t in [&left, &right].into_iter().flatten() {
            exceptions.push(indeterminate(Slope::from_tau(t), "endpoint with v = 1"));
        }
    }
    Ok(DetectionResult {
        detected,
        exceptions,
        core: None,
        low: None,
        high: None,
        nmax,
    })
}

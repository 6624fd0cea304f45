//! Brute-force checkers: grid enumeration of the `[m_0, m_1]` union and an
//! exhaustive `(A, N)` search over literal permutations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::seifert::{
    core_interval, floor, frac, jn_refine_high, jn_refine_low, tau_stats, ConstraintFamily, SeifertPiece,
};
use crate::slope::{fmt_rational, Rational};

/// Sample points for every constraint interval.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub d: BigInt,
    pub samples: Vec<Vec<Rational>>,
}

impl GridSpec {
    /// Endpoints plus every multiple of `1/(2d)` inside each interval, so
    /// each integer and a point just inside each side of it are present.
    pub fn new(c: &ConstraintFamily, d: &BigInt) -> Option<GridSpec> {
        let bounds = c.bounds()?;
        let step = BigRational::new(BigInt::one(), BigInt::from(2) * d);
        let samples = bounds
            .iter()
            .map(|(eta, zeta)| {
                let mut pts = vec![eta.clone(), zeta.clone()];
                let mut x = (eta / &step).ceil() * &step;
                while x <= *zeta {
                    pts.push(x.clone());
                    x += &step;
                }
                pts.sort();
                pts.dedup();
                pts
            })
            .collect();
        Some(GridSpec { d: d.clone(), samples })
    }
}

/// Least common multiple of the constraint endpoint denominators.
pub fn grid_denominator(c: &ConstraintFamily) -> BigInt {
    let mut d = BigInt::one();
    for (eta, zeta) in c.bounds().unwrap_or_default() {
        d = d.lcm(eta.denom()).lcm(zeta.denom());
    }
    d
}

/// `(min m_0, max m_1)` over grid tuples with `i_0 = 0`.
pub fn grid_union(piece: &SeifertPiece, c: &ConstraintFamily, spec: &GridSpec) -> Option<(BigInt, BigInt)> {
    // m_0 and m_1 only see (floor, integrality) of each coordinate
    let reps: Vec<Vec<Rational>> = spec
        .samples
        .iter()
        .map(|pts| {
            let mut by_class: BTreeMap<(BigInt, bool), Rational> = BTreeMap::new();
            for p in pts {
                by_class.entry((floor(p), p.is_integer())).or_insert_with(|| p.clone());
            }
            by_class.into_values().collect()
        })
        .collect();
    let mut best: Option<(BigInt, BigInt)> = None;
    let mut idx = vec![0usize; reps.len()];
    if reps.iter().any(|r| r.is_empty()) {
        return None;
    }
    loop {
        let taus: Vec<Rational> = idx.iter().zip(&reps).map(|(&i, r)| r[i].clone()).collect();
        let st = tau_stats(piece.n(), piece.r(), &taus, c.strong());
        if st.i_0 == 0 {
            best = Some(match best {
                None => (st.m_0, st.m_1),
                Some((lo, hi)) => (lo.min(st.m_0), hi.max(st.m_1)),
            });
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < reps[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A certificate found by the exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCertificate {
    pub n: i64,
    pub a: i64,
    pub values: Vec<i64>,
    pub eta: Rational,
}

/// The literal constraint tuple at the upper endpoints. A strong coordinate
/// sitting on an integer is nudged just below it.
fn upper_tuple(c: &ConstraintFamily, nmax: i64) -> Option<Vec<Rational>> {
    let eps = BigRational::new(BigInt::one(), BigInt::from(nmax + 1));
    c.bounds().map(|b| {
        b.into_iter()
            .enumerate()
            .map(|(j, (eta, zeta))| {
                if c.strong().contains(&j) && zeta.is_integer() {
                    eta.max(&zeta - &eps)
                } else {
                    zeta
                }
            })
            .collect()
    })
}

/// Next lexicographic arrangement of a multiset; false after the last one.
fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

struct Setup {
    gammas: Vec<Rational>,
    taus: Vec<Rational>,
    strong_int: Vec<bool>,
    strong: Vec<bool>,
    c_min: Rational,
}

fn setup(piece: &SeifertPiece, c: &ConstraintFamily, nmax: i64) -> Option<Setup> {
    let spec = GridSpec::new(c, &grid_denominator(c))?;
    let (lo, _) = grid_union(piece, c, &spec)?;
    let taus = upper_tuple(c, nmax)?;
    let bounds = c.bounds()?;
    Some(Setup {
        gammas: piece.gammas().to_vec(),
        strong_int: (0..taus.len())
            .map(|j| c.strong().contains(&j) && bounds[j].1.is_integer())
            .collect(),
        strong: (0..taus.len()).map(|j| c.strong().contains(&j)).collect(),
        taus,
        c_min: BigRational::from_integer(lo),
    })
}

fn conditions_one_two(s: &Setup, vals: &[i64], n: i64) -> bool {
    let one = BigRational::one();
    let part = |v: i64| BigRational::new(BigInt::from(v), BigInt::from(n));
    for (i, g) in s.gammas.iter().enumerate() {
        if !(&one - part(vals[i]) < *g) {
            return false;
        }
    }
    for (j, t) in s.taus.iter().enumerate() {
        let lhs = &one - part(vals[s.gammas.len() + j]);
        let ok = if s.strong[j] {
            s.strong_int[j] || lhs < frac(t)
        } else {
            !t.is_integer() && lhs <= frac(t)
        };
        if !ok {
            return false;
        }
    }
    true
}

fn each_arrangement(k: usize, nmax: i64, mut f: impl FnMut(i64, i64, &[i64]) -> bool) {
    for n in 2..=nmax {
        for a in 1..n {
            if a.gcd(&n) != 1 {
                continue;
            }
            let mut vals = vec![1i64; k];
            vals[0] = a;
            vals[1] = n - a;
            vals.sort();
            loop {
                if f(n, a, &vals) {
                    return;
                }
                if !next_permutation(&mut vals) {
                    break;
                }
            }
        }
    }
}

/// First certificate, in `(N, A, arrangement)` order, realizing the given
/// lower target `eta`.
pub fn jn_exhaustive(
    piece: &SeifertPiece,
    c: &ConstraintFamily,
    eta: &Rational,
    nmax: i64,
) -> Option<OracleCertificate> {
    let s = setup(piece, c, nmax)?;
    let k = piece.n() + c.len() + 1;
    let one = BigRational::one();
    let mut found = None;
    each_arrangement(k, nmax, |n, a, vals| {
        let lhs = &one - BigRational::new(BigInt::from(vals[k - 1]), BigInt::from(n));
        if lhs == eta - (&s.c_min - &one) && conditions_one_two(&s, vals, n) {
            found = Some(OracleCertificate {
                n,
                a,
                values: vals.to_vec(),
                eta: eta.clone(),
            });
            true
        } else {
            false
        }
    });
    found
}

/// Least `eta` over all certificates with `N <= nmax`.
pub fn jn_extremal_low(piece: &SeifertPiece, c: &ConstraintFamily, nmax: i64) -> Option<Rational> {
    let s = setup(piece, c, nmax)?;
    let k = piece.n() + c.len() + 1;
    let mut best: Option<Rational> = None;
    each_arrangement(k, nmax, |n, _, vals| {
        if conditions_one_two(&s, vals, n) {
            let eta = &s.c_min - BigRational::new(BigInt::from(vals[k - 1]), BigInt::from(n));
            if best.as_ref().is_none_or(|b| eta < *b) {
                best = Some(eta);
            }
        }
        false
    });
    best
}

/// Greatest upper refinement, through the orientation-reversed piece.
pub fn jn_extremal_high(piece: &SeifertPiece, c: &ConstraintFamily, nmax: i64) -> Option<Rational> {
    let n = BigRational::from_integer(BigInt::from(piece.n()));
    jn_extremal_low(&piece.mirror(), &c.mirror(), nmax).map(|eta| -eta - n)
}

/// Oracle version of the bounded horizontal detected interval.
pub fn oracle_interval(piece: &SeifertPiece, c: &ConstraintFamily, nmax: i64) -> Option<(Rational, Rational)> {
    let spec = GridSpec::new(c, &grid_denominator(c))?;
    let (lo, hi) = grid_union(piece, c, &spec)?;
    let left = jn_extremal_low(piece, c, nmax).unwrap_or_else(|| BigRational::from_integer(lo));
    let right = jn_extremal_high(piece, c, nmax).unwrap_or_else(|| BigRational::from_integer(hi));
    Some((left, right))
}

/// Closed form against the oracles on one piece.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub core: (String, String),
    pub grid: (String, String),
    pub low: Option<String>,
    pub low_oracle: Option<String>,
    pub high: Option<String>,
    pub high_oracle: Option<String>,
    pub nmax: i64,
    pub grid_denominator: String,
    pub agree: bool,
}

/// `None` when the closed form does not apply: non-orientable base, a
/// vertical or unbounded constraint, or `n + r < 3`.
pub fn oracle_check(piece: &SeifertPiece, c: &ConstraintFamily, grid: &BigInt, nmax: i64) -> Option<OracleCheck> {
    if !piece.orientable() || piece.n() + piece.r() < 3 || c.bounds().is_none() {
        return None;
    }
    let core = core_interval(piece, c).ok()?;
    let d = grid.lcm(&grid_denominator(c));
    let g = grid_union(piece, c, &GridSpec::new(c, &d)?)?;
    let big = BigInt::from(nmax);
    let low = jn_refine_low(piece, c, &big).ok()?.map(|x| x.0);
    let high = jn_refine_high(piece, c, &big).ok()?.map(|x| x.0);
    let low_oracle = jn_extremal_low(piece, c, nmax);
    let high_oracle = jn_extremal_high(piece, c, nmax);
    let agree = core == g && low == low_oracle && high == high_oracle;
    let show = |x: &Option<Rational>| x.as_ref().map(fmt_rational);
    Some(OracleCheck {
        core: (core.0.to_string(), core.1.to_string()),
        grid: (g.0.to_string(), g.1.to_string()),
        low: show(&low),
        low_oracle: show(&low_oracle),
        high: show(&high),
        high_oracle: show(&high_oracle),
        nmax,
        grid_denominator: d.to_string(),
        agree,
    })
}

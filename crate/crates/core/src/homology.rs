//! Integer homology of plumbing graphs by Smith normal form, and rational
//! longitudes of boundary tori.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{PlumbingGraph, TorusSide};
use crate::slope::{Slope, SlopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("first Betti number is {0}, expected 1")]
    Betti(usize),
    #[error("boundary torus carries no free homology")]
    DegenerateBoundary,
    #[error(transparent)]
    Slope(#[from] SlopeError),
}

/// Diagonal form `P R Q = D` with the column transform `Q` kept.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Nonzero diagonal entries, all positive, in pivot order.
    pub diag: Vec<BigInt>,
    pub q: Vec<Vec<BigInt>>,
    pub cols: usize,
}

pub fn smith(rows: &[Vec<BigInt>], cols: usize) -> Smith {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut q: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let nrows = m.len();
    let mut diag = vec![];
    let mut t = 0;
    while t < nrows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..cols {
                if !m[i][j].is_zero() && pivot.is_none_or(|(a, b)| m[i][j].abs() < m[a][b].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        swap_cols(&mut m, &mut q, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if !m[i][t].is_zero() {
                    let k = m[i][t].div_floor(&m[t][t]);
                    for j in t..cols {
                        let v = &m[t][j] * &k;
                        m[i][j] -= v;
                    }
                    dirty |= !m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let k = m[t][j].div_floor(&m[t][t]);
                    add_col(&mut m, &mut q, j, t, &-k);
                    dirty |= !m[t][j].is_zero();
                }
            }
            if !dirty {
                break;
            }
            // bring the smallest leftover in row/column t to the pivot
            let mut best = (t, t);
            for i in t + 1..nrows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            } else if best.1 != t {
                swap_cols(&mut m, &mut q, t, best.1);
            }
        }
        if m[t][t].is_negative() {
            for v in m[t].iter_mut() {
                *v = -v.clone();
            }
        }
        diag.push(m[t][t].clone());
        t += 1;
    }
    Smith { diag, q, cols }
}

fn swap_cols(m: &mut [Vec<BigInt>], q: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
    for row in q.iter_mut() {
        row.swap(a, b);
    }
}

/// `col_dst += k * col_src`.
fn add_col(m: &mut [Vec<BigInt>], q: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    for row in m.iter_mut().chain(q.iter_mut()) {
        let v = &row[src] * k;
        row[dst] += v;
    }
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn betti(&self) -> usize {
        self.cols - self.rank()
    }

    /// Coordinates of a class in the diagonal basis.
    pub fn coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.cols)
            .map(|j| v.iter().zip(&self.q).map(|(x, row)| x * &row[j]).sum())
            .collect()
    }

    /// Order of a class, `None` if infinite.
    pub fn order(&self, v: &[BigInt]) -> Option<BigInt> {
        let w = self.coords(v);
        if w[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            self.diag
                .iter()
                .zip(&w)
                .fold(BigInt::one(), |l, (d, x)| l.lcm(&(d / d.gcd(x)))),
        )
    }

    /// Invariant factors `> 1`, each dividing the next.
    pub fn torsion(&self) -> Vec<BigInt> {
        invariant_factors(&self.diag)
    }
}

pub fn invariant_factors(diag: &[BigInt]) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diag.iter().filter(|x| !x.is_one()).cloned().collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|x| !x.is_one());
    d
}

/// Generators and relations for a set of pieces and edges of a graph.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub rows: Vec<Vec<BigInt>>,
    pub cols: usize,
    h: BTreeMap<usize, usize>,
    d: BTreeMap<TorusSide, usize>,
}

impl Presentation {
    pub fn new(g: &PlumbingGraph, pieces: &[usize], edges: &[usize]) -> Presentation {
        let mut cols = 0;
        let mut h = BTreeMap::new();
        let mut d = BTreeMap::new();
        let mut rows = vec![];
        let mut pending = vec![];
        for &i in pieces {
            let p = &g.pieces[i];
            let x0 = cols;
            cols += p.cones.len();
            for k in 0..p.boundary {
                d.insert(TorusSide { piece: i, index: k }, cols);
                cols += 1;
            }
            let y0 = cols;
            cols += p.crosscaps as usize;
            h.insert(i, cols);
            cols += 1;
            pending.push((i, x0, y0));
        }
        for (i, x0, y0) in pending {
            let p = &g.pieces[i];
            let hi = h[&i];
            for (k, (a, beta)) in p.cones.iter().enumerate() {
                let mut r = vec![BigInt::zero(); cols];
                r[x0 + k] = a.clone();
                r[hi] += beta;
                rows.push(r);
            }
            let mut r = vec![BigInt::zero(); cols];
            for k in 0..p.cones.len() {
                r[x0 + k] = BigInt::one();
            }
            for k in 0..p.boundary {
                r[d[&TorusSide { piece: i, index: k }]] = BigInt::one();
            }
            for l in 0..p.crosscaps as usize {
                r[y0 + l] = BigInt::from(2);
            }
            r[hi] += &p.b;
            rows.push(r);
            if !p.orientable {
                let mut r = vec![BigInt::zero(); cols];
                r[hi] = BigInt::from(2);
                rows.push(r);
            }
        }
        let mut pres = Presentation { rows, cols, h, d };
        for &e in edges {
            let e = &g.edges[e];
            let m = &e.matrix;
            // h_from = a h_to + c h*_to,  h*_from = b h_to + d h*_to
            let (hf, sf) = pres.basis(e.from);
            let (ht, st) = pres.basis(e.to);
            pres.rows.push(sub(&hf, &add(&scale(&ht, &m.a), &scale(&st, &m.c))));
            pres.rows.push(sub(&sf, &add(&scale(&ht, &m.b), &scale(&st, &m.d))));
        }
        pres
    }

    /// Classes of `h` and `h*` on a boundary torus.
    pub fn basis(&self, s: TorusSide) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut h = vec![BigInt::zero(); self.cols];
        h[self.h[&s.piece]] = BigInt::one();
        let mut star = vec![BigInt::zero(); self.cols];
        star[self.d[&s]] = -BigInt::one();
        (h, star)
    }

    pub fn class(&self, s: TorusSide, slope: &Slope) -> Vec<BigInt> {
        let (h, star) = self.basis(s);
        add(&scale(&h, slope.p()), &scale(&star, slope.q()))
    }

    /// Adds the relation killing a slope on a boundary torus.
    pub fn fill(&mut self, s: TorusSide, slope: &Slope) {
        let r = self.class(s, slope);
        self.rows.push(r);
    }

    pub fn smith(&self) -> Smith {
        smith(&self.rows, self.cols)
    }
}

fn scale(v: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    v.iter().map(|x| x * k).collect()
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryImage {
    pub torus: String,
    /// Coordinates of `h` and `h*` in the diagonal basis; torsion
    /// coordinates reduced modulo their factor.
    pub h: Vec<String>,
    pub h_star: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub betti: usize,
    pub torsion: Vec<String>,
    pub boundary: Vec<BoundaryImage>,
}

pub fn homology(g: &PlumbingGraph) -> HomologySummary {
    let pieces: Vec<usize> = (0..g.pieces.len()).collect();
    let edges: Vec<usize> = (0..g.edges.len()).collect();
    let pres = Presentation::new(g, &pieces, &edges);
    let snf = pres.smith();
    let reduce = |v: Vec<BigInt>| -> Vec<String> {
        v.iter()
            .enumerate()
            .filter(|(i, _)| *i >= snf.rank() || !snf.diag[*i].is_one())
            .map(|(i, x)| {
                if i < snf.rank() {
                    x.mod_floor(&snf.diag[i])
                } else {
                    x.clone()
                }
                .to_string()
            })
            .collect()
    };
    let boundary = g
        .dangling()
        .into_iter()
        .map(|s| {
            let (h, star) = pres.basis(s);
            BoundaryImage {
                torus: g.side_name(s),
                h: reduce(snf.coords(&h)),
                h_star: reduce(snf.coords(&star)),
            }
        })
        .collect();
    HomologySummary {
        betti: snf.betti(),
        torsion: snf.torsion().iter().map(|x| x.to_string()).collect(),
        boundary,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongitudeResult {
    pub slope: Slope,
    pub order: String,
}

/// The primitive class on `root` that is torsion in the given presentation.
pub fn longitude_of(pres: &Presentation, root: TorusSide) -> Result<(Slope, BigInt), HomologyError> {
    let snf = pres.smith();
    if snf.betti() != 1 {
        return Err(HomologyError::Betti(snf.betti()));
    }
    let f = snf.rank();
    let (h, star) = pres.basis(root);
    let wh = snf.coords(&h)[f].clone();
    let ws = snf.coords(&star)[f].clone();
    if wh.is_zero() && ws.is_zero() {
        return Err(HomologyError::DegenerateBoundary);
    }
    let slope = Slope::from_pair(ws, -wh)?;
    let order = snf.order(&pres.class(root, &slope)).expect("longitude is torsion");
    Ok((slope, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlumbingGraph;

    fn n2() -> PlumbingGraph {
        PlumbingGraph::from_json(
            r#"{"role": "solid-torus", "pieces": [{"id": "N2", "base": {"orientable": false, "crosscaps": 1},
                "cones": [], "b": 0, "boundary": 1}], "edges": []}"#,
        )
        .unwrap()
    }

    #[test]
    fn smith_small() {
        let rows = vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(6), BigInt::from(8)],
        ];
        let s = smith(&rows, 2);
        assert_eq!(s.torsion(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn n2_homology_and_longitude() {
        let g = n2();
        let hs = homology(&g);
        assert_eq!(hs.betti, 1);
        assert_eq!(hs.torsion, vec!["2".to_string()]);
        let pres = Presentation::new(&g, &[0], &[]);
        let (l, order) = longitude_of(&pres, TorusSide { piece: 0, index: 0 }).unwrap();
        assert_eq!(l, Slope::vertical());
        assert_eq!(order, BigInt::from(2));
    }

    #[test]
    fn cone_pair_longitude() {
        // D^2(2,3) with beta = (1, 1), b = 0: lambda at tau = -(1/2 + 1/3)
        let g = PlumbingGraph::from_json(
            r#"{"role": "solid-torus", "pieces": [{"id": 0, "base": {"orientable": true, "crosscaps": 0},
                "cones": [[2,1],[3,1]], "b": 0, "boundary": 1}], "edges": []}"#,
        )
        .unwrap();
        let pres = Presentation::new(&g, &[0], &[]);
        let (l, order) = longitude_of(&pres, TorusSide { piece: 0, index: 0 }).unwrap();
        assert_eq!(l, Slope::from_pair(5, 6).unwrap());
        assert_eq!(order, BigInt::one());
    }
}

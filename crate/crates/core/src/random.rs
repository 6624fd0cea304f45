//! Seeded random instances: Seifert pieces with constraint families,
//! plumbing trees and closed rational homology spheres.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, Piece, PlumbingGraph, Role, TorusSide};
use crate::homology::homology;
use crate::seifert::{ConstraintFamily, SeifertPiece};
use crate::slope::{rat, GluingMatrix, Rational, SlopeArc};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct PieceParams {
    pub max_n: usize,
    pub max_r: usize,
    pub max_den: i64,
    pub max_order: i64,
}

impl Default for PieceParams {
    fn default() -> Self {
        PieceParams {
            max_n: 4,
            max_r: 4,
            max_den: 12,
            max_order: 7,
        }
    }
}

fn gamma(r: &mut impl Rng, max_order: i64) -> Rational {
    let a = r.gen_range(2..=max_order);
    loop {
        let b = r.gen_range(1..a);
        if b.gcd(&a) == 1 {
            return rat(b, a);
        }
    }
}

fn fraction(r: &mut impl Rng, max_den: i64, range: i64) -> Rational {
    let d = r.gen_range(1..=max_den);
    rat(r.gen_range(-range * d..=range * d), d)
}

/// An orientable planar piece with `n + r >= 3` and horizontal bounded
/// constraints on all but the last boundary; some constraints strong.
pub fn seifert_instance(r: &mut impl Rng, p: &PieceParams) -> (SeifertPiece, ConstraintFamily) {
    loop {
        let n = r.gen_range(0..=p.max_n);
        let bc = r.gen_range(1..=p.max_r);
        if n + bc < 3 {
            continue;
        }
        let gammas = (0..n).map(|_| gamma(r, p.max_order)).collect();
        let piece = SeifertPiece::planar(gammas, bc).expect("valid piece");
        let mut arcs = vec![];
        let mut strong = BTreeSet::new();
        for j in 0..bc - 1 {
            let x = fraction(r, p.max_den, 3);
            let y = fraction(r, p.max_den, 3);
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            if lo < hi && r.gen_bool(0.3) {
                strong.insert(j);
            }
            arcs.push(SlopeArc::tau_interval(&lo, &hi));
        }
        let c = ConstraintFamily::new(arcs, strong).expect("valid constraints");
        return (piece, c);
    }
}

/// A random `2 x 2` integer matrix of determinant `-1` with entries in
/// `[-bound, bound]`.
pub fn gluing_matrix(r: &mut impl Rng, bound: i64) -> GluingMatrix {
    loop {
        let (a, b, c, d) = (
            r.gen_range(-bound..=bound),
            r.gen_range(-bound..=bound),
            r.gen_range(-bound..=bound),
            r.gen_range(-bound..=bound),
        );
        if a * d - b * c == -1 {
            return GluingMatrix::new(a, b, c, d);
        }
    }
}

/// A random `2 x 2` integer matrix of determinant `+1`.
pub fn unimodular(r: &mut impl Rng, bound: i64) -> GluingMatrix {
    let g = gluing_matrix(r, bound);
    g.mul(&GluingMatrix::new(-1, 0, 0, 1))
}

#[derive(Clone, Debug)]
pub struct TreeParams {
    pub max_pieces: usize,
    pub max_order: i64,
    pub max_cones: usize,
    pub matrix_bound: i64,
    pub nonorientable: f64,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_pieces: 4,
            max_order: 5,
            max_cones: 3,
            matrix_bound: 5,
            nonorientable: 0.15,
        }
    }
}

fn piece(r: &mut impl Rng, id: usize, boundary: usize, t: &TreeParams) -> Piece {
    let orientable = !r.gen_bool(t.nonorientable);
    let crosscaps = if orientable { 0 } else { r.gen_range(1..=2) };
    let min_cones = if orientable && boundary <= 2 { 1 } else { 0 };
    let k = r.gen_range(min_cones..=t.max_cones.max(min_cones));
    let cones = (0..k)
        .map(|_| {
            let g = gamma(r, t.max_order);
            let shift = BigInt::from(r.gen_range(-1..=1)) * g.denom();
            (g.denom().clone(), g.numer() + shift)
        })
        .collect();
    Piece {
        id: format!("P{}", id),
        orientable,
        crosscaps,
        cones,
        b: BigInt::from(r.gen_range(-2..=2)),
        boundary,
    }
}

/// Random tree shape on `k` pieces: `parent[i] < i` for `i > 0`.
fn shape(r: &mut impl Rng, k: usize) -> Vec<usize> {
    (1..k).map(|i| r.gen_range(0..i)).collect()
}

fn assemble(r: &mut impl Rng, k: usize, role: Role, t: &TreeParams) -> PlumbingGraph {
    let parents = shape(r, k);
    let mut degree = vec![0usize; k];
    for (i, &p) in parents.iter().enumerate() {
        degree[i + 1] += 1;
        degree[p] += 1;
    }
    if role == Role::SolidTorus {
        degree[0] += 1;
    }
    let pieces: Vec<Piece> = (0..k).map(|i| piece(r, i, degree[i], t)).collect();
    let mut next = vec![0usize; k];
    if role == Role::SolidTorus {
        next[0] = 1;
    }
    let mut edges = vec![];
    for (i, &p) in parents.iter().enumerate() {
        let child = i + 1;
        let a = TorusSide {
            piece: p,
            index: next[p],
        };
        next[p] += 1;
        let b = TorusSide {
            piece: child,
            index: next[child],
        };
        next[child] += 1;
        let (from, to) = if r.gen_bool(0.5) { (a, b) } else { (b, a) };
        edges.push(Edge {
            from,
            to,
            matrix: gluing_matrix(r, t.matrix_bound),
        });
    }
    let mut g = PlumbingGraph { role, pieces, edges };
    g.edges.shuffle(r);
    g
}

/// A solid-torus graph with boundary `0` of piece `0` free and first Betti
/// number one.
pub fn solid_torus(r: &mut impl Rng, t: &TreeParams) -> PlumbingGraph {
    loop {
        let k = r.gen_range(1..=t.max_pieces);
        let g = assemble(r, k, Role::SolidTorus, t);
        if homology(&g).betti == 1 {
            return g;
        }
    }
}

/// A closed rational homology sphere with at least `min_edges` edges.
pub fn closed_qhs(r: &mut impl Rng, t: &TreeParams, min_edges: usize) -> PlumbingGraph {
    loop {
        let k = r.gen_range(min_edges + 1..=t.max_pieces.max(min_edges + 1));
        let g = assemble(r, k, Role::Closed, t);
        if homology(&g).betti == 0 {
            return g;
        }
    }
}

//! Plumbing graphs: Seifert pieces joined along boundary tori by integer
//! gluing matrices, with the JSON manifold format.
//!
//! Each boundary torus carries the frame `(h, h*)` where `h*` is minus the
//! boundary section class. An edge matrix sends `from`-side coordinates to
//! `to`-side coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seifert::SeifertPiece;
use crate::slope::{GluingMatrix, Rational};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed manifold JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate piece id {0}")]
    DuplicateId(String),
    #[error("edge refers to unknown piece {0}")]
    UnknownPiece(String),
    #[error("integer {0} does not fit")]
    Overflow(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "closed")]
    Closed,
    #[serde(rename = "solid-torus")]
    SolidTorus,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Closed => write!(f, "closed"),
            Role::SolidTorus => write!(f, "solid-torus"),
        }
    }
}

/// A boundary torus of a piece: `(piece index, boundary index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusSide {
    pub piece: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub id: String,
    pub orientable: bool,
    pub crosscaps: u32,
    /// `(a_i, beta_i)`.
    pub cones: Vec<(BigInt, BigInt)>,
    pub b: BigInt,
    pub boundary: usize,
}

impl Piece {
    /// Section obstruction after moving every `beta_i` into `[0, a_i)`.
    pub fn b_eff(&self) -> BigInt {
        let mut b = self.b.clone();
        for (a, beta) in &self.cones {
            b -= beta.div_floor(a);
        }
        b
    }

    pub fn gammas(&self) -> Vec<Rational> {
        self.cones
            .iter()
            .map(|(a, beta)| BigRational::new(beta.mod_floor(a), a.clone()))
            .collect()
    }

    pub fn seifert(&self) -> SeifertPiece {
        SeifertPiece::new(self.orientable, self.crosscaps, self.gammas(), self.boundary).expect("validated piece")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: TorusSide,
    pub to: TorusSide,
    pub matrix: GluingMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    pub role: Role,
    pub pieces: Vec<Piece>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum PieceId {
    Int(i64),
    Str(String),
}

impl PieceId {
    fn key(&self) -> String {
        match self {
            PieceId::Int(i) => i.to_string(),
            PieceId::Str(s) => s.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseFile {
    orientable: bool,
    crosscaps: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceFile {
    id: PieceId,
    base: BaseFile,
    cones: Vec<[i64; 2]>,
    b: i64,
    boundary: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    from: (PieceId, usize),
    to: (PieceId, usize),
    matrix: [[i64; 2]; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    role: Role,
    pieces: Vec<PieceFile>,
    edges: Vec<EdgeFile>,
}

fn small(x: &BigInt) -> Result<i64, GraphError> {
    i64::try_from(x).map_err(|_| GraphError::Overflow(x.to_string()))
}

impl PlumbingGraph {
    pub fn from_json(text: &str) -> Result<PlumbingGraph, GraphError> {
        let file: GraphFile = serde_json::from_str(text)?;
        let mut index = BTreeMap::new();
        for (i, p) in file.pieces.iter().enumerate() {
            if index.insert(p.id.key(), i).is_some() {
                return Err(GraphError::DuplicateId(p.id.key()));
            }
        }
        let side = |(id, k): &(PieceId, usize)| -> Result<TorusSide, GraphError> {
            let piece = *index.get(&id.key()).ok_or_else(|| GraphError::UnknownPiece(id.key()))?;
            Ok(TorusSide { piece, index: *k })
        };
        let mut edges = vec![];
        for e in &file.edges {
            let m = e.matrix;
            edges.push(Edge {
                from: side(&e.from)?,
                to: side(&e.to)?,
                matrix: GluingMatrix::new(m[0][0], m[0][1], m[1][0], m[1][1]),
            });
        }
        let pieces = file
            .pieces
            .into_iter()
            .map(|p| Piece {
                id: p.id.key(),
                orientable: p.base.orientable,
                crosscaps: p.base.crosscaps,
                cones: p
                    .cones
                    .iter()
                    .map(|c| (BigInt::from(c[0]), BigInt::from(c[1])))
                    .collect(),
                b: BigInt::from(p.b),
                boundary: p.boundary,
            })
            .collect();
        Ok(PlumbingGraph {
            role: file.role,
            pieces,
            edges,
        })
    }

    pub fn to_json(&self) -> Result<String, GraphError> {
        let id = |s: &str| {
            s.parse::<i64>()
                .map(PieceId::Int)
                .unwrap_or_else(|_| PieceId::Str(s.to_string()))
        };
        let mut pieces = vec![];
        for p in &self.pieces {
            let mut cones = vec![];
            for (a, beta) in &p.cones {
                cones.push([small(a)?, small(beta)?]);
            }
            pieces.push(PieceFile {
                id: id(&p.id),
                base: BaseFile {
                    orientable: p.orientable,
                    crosscaps: p.crosscaps,
                },
                cones,
                b: small(&p.b)?,
                boundary: p.boundary,
            });
        }
        let mut edges = vec![];
        for e in &self.edges {
            let m = &e.matrix;
            edges.push(EdgeFile {
                from: (id(&self.pieces[e.from.piece].id), e.from.index),
                to: (id(&self.pieces[e.to.piece].id), e.to.index),
                matrix: [[small(&m.a)?, small(&m.b)?], [small(&m.c)?, small(&m.d)?]],
            });
        }
        let file = GraphFile {
            role: self.role,
            pieces,
            edges,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Boundary tori not used by any edge, in piece order.
    pub fn dangling(&self) -> Vec<TorusSide> {
        let used: BTreeSet<TorusSide> = self.edges.iter().flat_map(|e| [e.from, e.to]).collect();
        let mut out = vec![];
        for (i, p) in self.pieces.iter().enumerate() {
            for k in 0..p.boundary {
                let s = TorusSide { piece: i, index: k };
                if !used.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Edge glued at a side, if any.
    pub fn edge_at(&self, s: TorusSide) -> Option<usize> {
        self.edges.iter().position(|e| e.from == s || e.to == s)
    }

    pub fn side_name(&self, s: TorusSide) -> String {
        format!("{}:{}", self.pieces[s.piece].id, s.index)
    }

    pub fn is_valid(&self) -> bool {
        validate(self).iter().all(|d| d.severity != Severity::Error)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {}", tag, self.message)
    }
}

pub fn validate(g: &PlumbingGraph) -> Vec<Diagnostic> {
    let mut out = vec![];
    let mut err = |m: String| {
        out.push(Diagnostic {
            severity: Severity::Error,
            message: m,
        })
    };
    if g.pieces.is_empty() {
        err("no pieces".into());
    }
    for p in &g.pieces {
        if p.orientable != (p.crosscaps == 0) {
            err(format!(
                "piece {}: orientable base needs crosscaps = 0, non-orientable needs >= 1",
                p.id
            ));
        }
        for (a, beta) in &p.cones {
            if *a < BigInt::from(2) {
                err(format!("piece {}: cone order {} < 2", p.id, a));
            } else if !a.gcd(beta).is_one() {
                err(format!("piece {}: cone ({}, {}) not coprime", p.id, a, beta));
            }
        }
    }
    let mut seen = BTreeSet::new();
    for (k, e) in g.edges.iter().enumerate() {
        for s in [e.from, e.to] {
            if s.index >= g.pieces[s.piece].boundary {
                err(format!(
                    "edge {}: piece {} has no boundary {}",
                    k, g.pieces[s.piece].id, s.index
                ));
            }
            if !seen.insert(s) {
                err(format!("edge {}: boundary {} glued twice", k, g.side_name(s)));
            }
        }
        let det = e.matrix.det();
        if det == BigInt::one() {
            err(format!("edge {}: orientation-incompatible gluing (det = +1)", k));
        } else if det != -BigInt::one() {
            err(format!("edge {}: matrix not unimodular (det = {})", k, det));
        }
    }
    if !g.pieces.is_empty() && !is_tree(g) {
        err("not a tree".into());
    }
    let dangling = g.dangling().len();
    match g.role {
        Role::Closed if dangling != 0 => err(format!("closed role but {} free boundary tori", dangling)),
        Role::SolidTorus if dangling != 1 => err(format!(
            "solid-torus role needs exactly one free torus, found {}",
            dangling
        )),
        _ => {}
    }
    for p in &g.pieces {
        for (a, beta) in &p.cones {
            if a.is_positive() && (!beta.is_positive() || beta >= a) {
                out.push(Diagnostic {
                    severity: Severity::Warning,
                    message: format!("piece {}: cone ({}, {}) not normalized into (0, 1)", p.id, a, beta),
                });
            }
        }
    }
    out
}

fn is_tree(g: &PlumbingGraph) -> bool {
    let n = g.pieces.len();
    if g.edges.len() + 1 != n {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for e in &g.edges {
        let (a, b) = (find(&mut parent, e.from.piece), find(&mut parent, e.to.piece));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Moves every `beta_i` into `[0, a_i)` and absorbs each piece's `b` into
/// the section of its first glued boundary, adjusting that edge matrix.
/// Pieces without a glued boundary keep their `b`.
pub fn normalize(g: &PlumbingGraph) -> PlumbingGraph {
    let mut out = g.clone();
    for (i, p) in out.pieces.iter_mut().enumerate() {
        let b = p.b_eff();
        p.cones = p.cones.iter().map(|(a, beta)| (a.clone(), beta.mod_floor(a))).collect();
        p.b = b.clone();
        if b.is_zero() {
            continue;
        }
        let glued = (0..p.boundary).find_map(|k| {
            let s = TorusSide { piece: i, index: k };
            g.edge_at(s).map(|e| (s, e))
        });
        if let Some((s, e)) = glued {
            // new coordinates = shear(b) * old on that side
            let t = GluingMatrix::shear(&b);
            let edge = &mut out.edges[e];
            if edge.from == s {
                edge.matrix = edge.matrix.mul(&t.inverse());
            } else {
                edge.matrix = t.mul(&edge.matrix);
            }
            p.b = BigInt::zero();
        }
    }
    out
}

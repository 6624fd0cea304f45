//! Detection over a JSJ tree, the degenerate-point analysis and the closed
//! manifold taut foliation decision with a slope certificate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{validate, PlumbingGraph, Role, TorusSide};
use crate::homology::{longitude_of, HomologyError, Presentation};
use crate::seifert::{
    core_interval, default_nmax, detect_relative, detect_relative_with, floor, tau_stats, ConstraintFamily,
    DetectError, DetectionResult, SeifertPiece, StrongStatus,
};
use crate::slope::{act, act_arc, arc_intersect, GluingMatrix, Rational, Slope, SlopeArc};

#[derive(Debug, Error)]
pub enum CtfError {
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("expected role {expected}, found {found}")]
    Role { expected: Role, found: Role },
    #[error("free boundary torus {0} is not the root")]
    ExtraBoundary(String),
    #[error("closed graph has first Betti number {0}, not a rational homology sphere")]
    NotQhs(usize),
    #[error("closed Seifert manifold without JSJ tori; fill a one-piece solid torus and use detect instead")]
    Edgeless,
    #[error("edge {0} does not exist")]
    NoEdge(usize),
    #[error("slope {0} is not detected")]
    NotDetected(Slope),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// The part of a graph on one side of a torus, seen as a rational homology
/// solid torus with boundary `root`.
#[derive(Clone, Copy, Debug)]
pub struct SolidTorus<'a> {
    pub graph: &'a PlumbingGraph,
    pub root: TorusSide,
    pub cut: Option<usize>,
}

impl<'a> SolidTorus<'a> {
    /// The whole graph of a solid-torus role manifold.
    pub fn new(graph: &'a PlumbingGraph) -> Result<SolidTorus<'a>, CtfError> {
        check_valid(graph)?;
        if graph.role != Role::SolidTorus {
            return Err(CtfError::Role {
                expected: Role::SolidTorus,
                found: graph.role,
            });
        }
        Ok(SolidTorus {
            graph,
            root: graph.dangling()[0],
            cut: None,
        })
    }

    /// The side of `edge` containing `root`.
    pub fn split(graph: &'a PlumbingGraph, edge: usize, root: TorusSide) -> SolidTorus<'a> {
        SolidTorus {
            graph,
            root,
            cut: Some(edge),
        }
    }

    pub fn piece(&self) -> usize {
        self.root.piece
    }

    /// `(boundary index, edge, child solid torus)` for every other boundary.
    pub fn children(&self) -> Result<Vec<(usize, usize, SolidTorus<'a>)>, CtfError> {
        let p = &self.graph.pieces[self.root.piece];
        let mut out = vec![];
        for k in 0..p.boundary {
            if k == self.root.index {
                continue;
            }
            let s = TorusSide {
                piece: self.root.piece,
                index: k,
            };
            let e = self
                .graph
                .edge_at(s)
                .filter(|e| Some(*e) != self.cut)
                .ok_or_else(|| CtfError::ExtraBoundary(self.graph.side_name(s)))?;
            let edge = &self.graph.edges[e];
            let other = if edge.from == s { edge.to } else { edge.from };
            out.push((
                k,
                e,
                SolidTorus {
                    graph: self.graph,
                    root: other,
                    cut: Some(e),
                },
            ));
        }
        Ok(out)
    }

    /// Matrix taking child-frame coordinates at the far side of `edge` to
    /// this piece's frame at boundary `k`.
    pub fn to_parent(&self, k: usize, edge: usize) -> GluingMatrix {
        let e = &self.graph.edges[edge];
        if e.from
            == (TorusSide {
                piece: self.root.piece,
                index: k,
            })
        {
            e.matrix.inverse()
        } else {
            e.matrix.clone()
        }
    }

    pub fn pieces_and_edges(&self) -> Result<(Vec<usize>, Vec<usize>), CtfError> {
        let mut pieces = vec![self.root.piece];
        let mut edges = vec![];
        for (_, e, child) in self.children()? {
            edges.push(e);
            let (p, es) = child.pieces_and_edges()?;
            pieces.extend(p);
            edges.extend(es);
        }
        Ok((pieces, edges))
    }

    pub fn presentation(&self) -> Result<Presentation, CtfError> {
        let (p, e) = self.pieces_and_edges()?;
        Ok(Presentation::new(self.graph, &p, &e))
    }

    /// Rational longitude and its order in first homology.
    pub fn longitude(&self) -> Result<(Slope, BigInt), CtfError> {
        Ok(longitude_of(&self.presentation()?, self.root)?)
    }
}

fn check_valid(g: &PlumbingGraph) -> Result<(), CtfError> {
    let errs: Vec<String> = validate(g)
        .into_iter()
        .filter(|d| d.severity == crate::graph::Severity::Error)
        .map(|d| d.message)
        .collect();
    if errs.is_empty() {
        Ok(())
    } else {
        Err(CtfError::Invalid(errs.join("; ")))
    }
}

/// Root piece data in the shape the Seifert kernel expects: boundaries
/// reordered so the root comes last.
pub struct Local {
    pub model: SeifertPiece,
    pub b: BigInt,
    /// Boundary indices of the constraint slots, in order.
    pub slots: Vec<usize>,
}

impl Local {
    pub fn of(g: &PlumbingGraph, piece: usize, target: usize) -> Local {
        let p = &g.pieces[piece];
        Local {
            model: p.seifert(),
            b: p.b_eff(),
            slots: (0..p.boundary).filter(|&k| k != target).collect(),
        }
    }

    /// Native frame to the frame with the obstruction absorbed: `tau -> tau - b`.
    pub fn to_norm(&self) -> GluingMatrix {
        GluingMatrix::shear(&self.b)
    }

    pub fn to_native(&self) -> GluingMatrix {
        GluingMatrix::shear(&-&self.b)
    }

    pub fn detect(&self, c: &ConstraintFamily, nmax: Option<&BigInt>) -> Result<DetectionResult, DetectError> {
        let d = match nmax {
            Some(n) => detect_relative_with(&self.model, c, n)?,
            None => detect_relative(&self.model, c)?,
        };
        Ok(d.reframe(&self.to_native()))
    }
}

#[derive(Clone, Debug)]
pub struct ChildDetection {
    pub boundary: usize,
    pub edge: usize,
    pub to_parent: GluingMatrix,
    pub tree: TreeDetection,
    /// The child's detection moved into the parent frame.
    pub transported: DetectionResult,
}

#[derive(Clone, Debug)]
pub struct TreeDetection {
    pub piece: usize,
    pub root: TorusSide,
    pub result: DetectionResult,
    pub children: Vec<ChildDetection>,
}

pub fn detect_tree(v: &SolidTorus) -> Result<TreeDetection, CtfError> {
    let g = v.graph;
    let local = Local::of(g, v.piece(), v.root.index);
    let mut children = vec![];
    for (k, e, child) in v.children()? {
        let tree = detect_tree(&child)?;
        let to_parent = v.to_parent(k, e);
        let transported = tree.result.reframe(&to_parent);
        children.push(ChildDetection {
            boundary: k,
            edge: e,
            to_parent,
            tree,
            transported,
        });
    }
    let c = ConstraintFamily::plain(children.iter().map(|ch| ch.transported.detected.clone()).collect())?;
    let mut result = local.detect(&c, None)?;
    cable_exception(&local, &children, &mut result);
    fibre_exception(v, &local, &children, &mut result)?;
    Ok(TreeDetection {
        piece: v.piece(),
        root: v.root,
        result,
        children,
    })
}

/// Case (a): a cable space root where some strongly detected horizontal
/// slope fills to a solid torus whose meridian is not strong below.
fn cable_exception(local: &Local, children: &[ChildDetection], result: &mut DetectionResult) {
    let m = &local.model;
    if !(m.orientable() && m.n() == 1 && m.r() == 2) {
        return;
    }
    let child = &children[0].transported;
    let gamma = &m.gammas()[0];
    let b = BigRational::from_integer(local.b.clone());
    for ex in child.exceptions.clone() {
        let Some(t_mu) = ex.slope.tau() else { continue };
        if !child.contains(&ex.slope) {
            continue;
        }
        let alpha = Slope::from_tau(&(&b - gamma - t_mu));
        if alpha.q().is_one() && result.strong_status(&alpha) == Some(StrongStatus::Strong) {
            result.set_status(
                &alpha,
                StrongStatus::Indeterminate,
                "cable space filling with a non-strong meridian below",
            );
        }
    }
}

/// Case (b): the rational longitude when the root fibres with fibre meeting
/// the inner torus once and the child detects only that boundary slope.
fn fibre_exception(
    v: &SolidTorus,
    local: &Local,
    children: &[ChildDetection],
    result: &mut DetectionResult,
) -> Result<(), CtfError> {
    let m = &local.model;
    if !(m.orientable() && m.n() >= 1 && m.r() == 2) {
        return Ok(());
    }
    let ch = &children[0];
    let SlopeArc::Point(mu) = &ch.transported.detected else {
        return Ok(());
    };
    if mu.is_vertical() || ch.transported.strong_status(mu) == Some(StrongStatus::Strong) {
        return Ok(());
    }
    let (lambda, _) = v.longitude()?;
    if lambda.is_vertical() || result.strong_status(&lambda) != Some(StrongStatus::Strong) {
        return Ok(());
    }
    let inner = TorusSide {
        piece: v.piece(),
        index: ch.boundary,
    };
    if fibre_boundary_count(v.graph, v.root, &lambda, inner, mu) == Some(BigInt::one()) {
        result.set_status(
            &lambda,
            StrongStatus::Indeterminate,
            "fibre with one boundary circle on the inner torus",
        );
    }
    Ok(())
}

/// Number of boundary circles on `inner` of the horizontal fibre of the
/// piece filled along `outer_slope` and `inner_slope`, if it fibres.
pub fn fibre_boundary_count(
    g: &PlumbingGraph,
    outer: TorusSide,
    outer_slope: &Slope,
    inner: TorusSide,
    inner_slope: &Slope,
) -> Option<BigInt> {
    let mut pres = Presentation::new(g, &[outer.piece], &[]);
    pres.fill(outer, outer_slope);
    pres.fill(inner, inner_slope);
    let snf = pres.smith();
    if snf.betti() != 1 {
        return None;
    }
    let f = snf.rank();
    let (h, star) = pres.basis(inner);
    let phi_h = snf.coords(&h)[f].clone();
    let phi_s = snf.coords(&star)[f].clone();
    if phi_h.is_zero() {
        return None;
    }
    Some(phi_h.gcd(&phi_s))
}

/// Every piece of the tree with its constraint family in the frame where
/// the section obstruction is absorbed.
pub fn local_problems(
    v: &SolidTorus,
    tree: &TreeDetection,
) -> Result<Vec<(usize, SeifertPiece, ConstraintFamily)>, CtfError> {
    let local = Local::of(v.graph, v.piece(), v.root.index);
    let norm = local.to_norm();
    let arcs = tree
        .children
        .iter()
        .map(|c| act_arc(&norm, &c.transported.detected).expect("unimodular"))
        .collect();
    let mut out = vec![(v.piece(), local.model, ConstraintFamily::plain(arcs)?)];
    for ((_, _, child), ch) in v.children()?.into_iter().zip(&tree.children) {
        out.extend(local_problems(&child, &ch.tree)?);
    }
    Ok(out)
}

pub fn v_of(children: &[ChildDetection]) -> usize {
    children
        .iter()
        .filter(|c| c.transported.detected.contains_vertical())
        .count()
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateReport {
    pub is_point: bool,
    pub branch: String,
    pub predicted: bool,
    pub consistent: bool,
    pub explanation: String,
}

pub fn check_degenerate(v: &SolidTorus) -> Result<DegenerateReport, CtfError> {
    let tree = detect_tree(v)?;
    let is_point = tree.result.is_point();
    let local = Local::of(v.graph, v.piece(), v.root.index);
    let vc = v_of(&tree.children);
    let (lambda, _) = v.longitude()?;
    let (branch, predicted, why) = if !local.model.orientable() {
        ("Q-base".to_string(), vc == 0, format!("v(D_*) = {}", vc))
    } else if !lambda.is_vertical() {
        let mut ok = vc == 0;
        let mut lambdas = vec![];
        for ((_, _, child), ch) in v.children()?.into_iter().zip(&tree.children) {
            let (l, _) = child.longitude()?;
            ok &= ch.tree.result.detected == SlopeArc::Point(l.clone());
            lambdas.push(act(&ch.to_parent, &l).expect("unimodular"));
        }
        if ok {
            let d = local.detect(&ConstraintFamily::points(&lambdas), None)?;
            ok = d.detected == SlopeArc::Point(lambda.clone());
        }
        (
            "P-base, horizontal longitude".to_string(),
            ok,
            format!(
                "v(D_*) = {}, children are points at their longitudes and the filled piece detects only lambda",
                vc
            ),
        )
    } else {
        let ok = vc == 1
            && tree
                .children
                .iter()
                .filter(|c| c.transported.detected.contains_vertical())
                .all(|c| c.transported.detected == SlopeArc::Point(Slope::vertical()));
        (
            "P-base, vertical longitude".to_string(),
            ok,
            format!("v(D_*) = {} and the child through h is the point h", vc),
        )
    };
    let lambda_ok = !is_point || tree.result.detected == SlopeArc::Point(lambda.clone());
    let consistent = predicted == is_point && lambda_ok;
    let explanation = format!(
        "{}: {}; predicted point = {}, computed point = {}{}",
        branch,
        why,
        predicted,
        is_point,
        if lambda_ok {
            ""
        } else {
            "; point differs from the rational longitude"
        }
    );
    Ok(DegenerateReport {
        is_point,
        branch,
        predicted,
        consistent,
        explanation,
    })
}

/// A slope on every boundary torus of every piece, keyed by side.
pub type SlopeAssignment = BTreeMap<TorusSide, Slope>;

pub fn extract_witness(v: &SolidTorus, target: &Slope) -> Result<SlopeAssignment, CtfError> {
    let tree = detect_tree(v)?;
    let mut out = SlopeAssignment::new();
    extract_into(v, &tree, target, &mut out)?;
    Ok(out)
}

fn extract_into(
    v: &SolidTorus,
    tree: &TreeDetection,
    target: &Slope,
    out: &mut SlopeAssignment,
) -> Result<(), CtfError> {
    if !tree.result.contains(target) {
        return Err(CtfError::NotDetected(target.clone()));
    }
    out.insert(v.root, target.clone());
    let local = Local::of(v.graph, v.piece(), v.root.index);
    let arcs: Vec<SlopeArc> = tree.children.iter().map(|c| c.transported.detected.clone()).collect();
    let tuple = choose_tuple(&local, &arcs, target, &tree.result.nmax)?;
    for (((_, _, child), ch), s) in v.children()?.into_iter().zip(&tree.children).zip(tuple) {
        out.insert(
            TorusSide {
                piece: v.piece(),
                index: ch.boundary,
            },
            s.clone(),
        );
        let down = act(&ch.to_parent.inverse(), &s).expect("unimodular");
        extract_into(&child, &ch.tree, &down, out)?;
    }
    Ok(())
}

fn horizontal_point(a: &SlopeArc) -> Option<Slope> {
    match a {
        SlopeArc::Point(s) if !s.is_vertical() => Some(s.clone()),
        SlopeArc::Point(_) | SlopeArc::Empty => None,
        SlopeArc::Full => Some(Slope::from_int_tau(0)),
        SlopeArc::Arc(s, e) => {
            let (lo, hi) = (s.tau(), e.tau());
            let pick = match (lo, hi) {
                (Some(l), Some(h)) if l < h => crate::slope::simplest_between(&l, &h),
                (Some(l), Some(_)) => l.ceil() + BigRational::one(),
                (Some(l), None) => l.ceil() + BigRational::one(),
                (None, Some(h)) => h.floor() - BigRational::one(),
                (None, None) => unreachable!(),
            };
            Some(Slope::from_tau(&pick))
        }
    }
}

fn any_point(a: &SlopeArc) -> Slope {
    horizontal_point(a).unwrap_or_else(Slope::vertical)
}

/// Point constraints, in the root piece's native frames, under which the
/// target is detected.
pub fn choose_tuple(local: &Local, arcs: &[SlopeArc], target: &Slope, nmax: &BigInt) -> Result<Vec<Slope>, CtfError> {
    let m = &local.model;
    let alpha = act(&local.to_norm(), target).expect("unimodular");
    let verticals: Vec<usize> = (0..arcs.len()).filter(|&j| arcs[j].contains_vertical()).collect();
    let tuple: Vec<Slope> = if arcs.is_empty() {
        vec![]
    } else if !m.orientable() {
        if alpha.is_vertical() {
            arcs.iter().map(any_point).collect()
        } else {
            let j0 = *verticals.first().ok_or_else(|| CtfError::NotDetected(target.clone()))?;
            (0..arcs.len())
                .map(|j| {
                    if j == j0 {
                        Slope::vertical()
                    } else {
                        any_point(&arcs[j])
                    }
                })
                .collect()
        }
    } else if m.is_torus_x_interval() {
        vec![act(&GluingMatrix::new(-1, 0, 0, 1), &alpha).expect("unimodular")]
    } else if alpha.is_vertical() || verticals.len() >= 2 {
        let want = if alpha.is_vertical() { 1 } else { 2 };
        if verticals.len() < want {
            return Err(CtfError::NotDetected(target.clone()));
        }
        (0..arcs.len())
            .map(|j| {
                if verticals[..want].contains(&j) {
                    Slope::vertical()
                } else {
                    any_point(&arcs[j])
                }
            })
            .collect()
    } else {
        let t = alpha.tau().expect("horizontal");
        let taus =
            horizontal_tuple(m, arcs, &verticals, &t, nmax).ok_or_else(|| CtfError::NotDetected(target.clone()))?;
        taus.iter().map(Slope::from_tau).collect()
    };
    let c = ConstraintFamily::points(&tuple);
    let d = detect_relative_with(m, &c, nmax)?;
    if !d.contains(&alpha) {
        return Err(CtfError::NotDetected(target.clone()));
    }
    Ok(tuple)
}

fn horizontal_tuple(
    m: &SeifertPiece,
    arcs: &[SlopeArc],
    verticals: &[usize],
    t: &Rational,
    nmax: &BigInt,
) -> Option<Vec<Rational>> {
    let mut bounds: Vec<(Rational, Rational)> = vec![];
    for (j, a) in arcs.iter().enumerate() {
        if verticals.contains(&j) {
            bounds.push((BigRational::zero(), BigRational::zero()));
        } else {
            bounds.push(a.finite_bounds()?);
        }
    }
    let Some(&j0) = verticals.first() else {
        return walk(m, &bounds, t, nmax);
    };
    // truncate the unbounded constraint to a long enough window
    let (minus, plus) = match &arcs[j0] {
        SlopeArc::Full => (Some(None), Some(None)),
        SlopeArc::Arc(s, e) if s.is_vertical() => (Some(e.tau()), None),
        SlopeArc::Arc(s, e) if e.is_vertical() => (None, Some(s.tau())),
        SlopeArc::Arc(s, e) => (Some(e.tau()), Some(s.tau())),
        _ => return None,
    };
    let base = t.abs().ceil().to_integer() + BigInt::from(2);
    for step in 0..64u32 {
        let k = BigRational::from_integer(&base + (BigInt::one() << step));
        let mut windows = vec![];
        if let Some(b) = plus.clone() {
            let lo = b.clone().unwrap_or_else(|| -k.clone());
            windows.push((lo.clone(), lo.max(k.clone())));
        }
        if let Some(a) = minus.clone() {
            let hi = a.unwrap_or_else(|| k.clone());
            windows.push((hi.clone().min(-k.clone()), hi));
        }
        for w in windows {
            let mut bs = bounds.clone();
            bs[j0] = w;
            if let Some(tuple) = walk(m, &bs, t, nmax) {
                return Some(tuple);
            }
        }
    }
    None
}

/// Walks constraint tuples from the upper endpoints to the lower ones and
/// returns one whose relative detected set contains `t`.
fn walk(m: &SeifertPiece, bounds: &[(Rational, Rational)], t: &Rational, nmax: &BigInt) -> Option<Vec<Rational>> {
    let zetas: Vec<Rational> = bounds.iter().map(|b| b.1.clone()).collect();
    let etas: Vec<Rational> = bounds.iter().map(|b| b.0.clone()).collect();
    let arcs = bounds.iter().map(|(l, h)| SlopeArc::tau_interval(l, h)).collect();
    let c = ConstraintFamily::plain(arcs).ok()?;
    let (c_min, c_max) = core_interval(m, &c).ok()?;
    let holds = |taus: &[Rational]| -> bool {
        let pts: Vec<Slope> = taus.iter().map(Slope::from_tau).collect();
        detect_relative_with(m, &ConstraintFamily::points(&pts), nmax)
            .map(|d| d.contains(&Slope::from_tau(t)))
            .unwrap_or(false)
    };
    if *t < BigRational::from_integer(c_min) {
        return holds(&zetas).then_some(zetas);
    }
    if *t > BigRational::from_integer(c_max) {
        return holds(&etas).then_some(etas);
    }
    let in_core = |taus: &[Rational]| {
        let st = tau_stats(m.n(), m.r(), taus, &Default::default());
        BigRational::from_integer(st.m_0) <= *t && *t <= BigRational::from_integer(st.m_1)
    };
    let mut cur = zetas.clone();
    if in_core(&cur) {
        return Some(cur);
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for (j, (eta, zeta)) in bounds.iter().enumerate() {
        // every (floor, integrality) class between zeta and eta, descending
        let mut pts = vec![eta.clone()];
        let mut k = floor(zeta);
        while BigRational::from_integer(k.clone()) >= *eta {
            let kr = BigRational::from_integer(k.clone());
            pts.push(kr.clone());
            if &kr - &half > *eta {
                pts.push(&kr - &half);
            }
            k -= 1;
        }
        pts.sort();
        pts.reverse();
        for p in pts {
            if p > *zeta {
                continue;
            }
            cur[j] = p;
            if in_core(&cur) {
                return Some(cur);
            }
        }
    }
    None
}

/// Whether a full tuple of boundary slopes of a piece is detected, taking
/// the last boundary as target.
pub fn tuple_detected(g: &PlumbingGraph, piece: usize, slopes: &[Slope]) -> Result<bool, CtfError> {
    let target = slopes.len() - 1;
    tuple_detected_at(g, piece, slopes, target)
}

pub fn tuple_detected_at(g: &PlumbingGraph, piece: usize, slopes: &[Slope], target: usize) -> Result<bool, CtfError> {
    let local = Local::of(g, piece, target);
    let others: Vec<Slope> = local.slots.iter().map(|&k| slopes[k].clone()).collect();
    let c = ConstraintFamily::points(&others);
    let mut nmax = default_nmax(&local.model, &c);
    if let Some(t) = act(&local.to_norm(), &slopes[target]).expect("unimodular").tau() {
        nmax = BigInt::from(2) * t.denom() * &nmax;
    }
    Ok(local.detect(&c, Some(&nmax))?.contains(&slopes[target]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PieceTag {
    VerticalAnnulus,
    Fibration,
    HorizontalNonFibred,
}

impl fmt::Display for PieceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// How a detected tuple sits in its piece: through a vertical slope, on the
/// Euler-zero locus where the piece fibres horizontally, or otherwise.
pub fn classify_piece(g: &PlumbingGraph, piece: usize, slopes: &[Slope]) -> PieceTag {
    if slopes.iter().any(|s| s.is_vertical()) {
        return PieceTag::VerticalAnnulus;
    }
    let p = &g.pieces[piece];
    let mut euler = p.seifert().gamma_sum() - BigRational::from_integer(p.b_eff());
    for s in slopes {
        euler += s.tau().expect("horizontal");
    }
    if p.orientable && euler.is_zero() {
        PieceTag::Fibration
    } else {
        PieceTag::HorizontalNonFibred
    }
}

#[derive(Clone, Debug)]
pub struct CtfVerdict {
    pub admits: bool,
    pub split_edge: usize,
    pub witness: Option<SlopeAssignment>,
    pub piece_tags: BTreeMap<usize, PieceTag>,
    pub lspace_note: String,
    pub from_side: DetectionResult,
    pub to_side: DetectionResult,
}

/// Preference order among witness slopes.
pub fn witness_key(s: &Slope) -> (BigInt, BigInt, bool) {
    (s.q().clone(), s.p().abs(), !s.p().is_negative())
}

pub fn decide_ctf(g: &PlumbingGraph, split_edge: usize) -> Result<CtfVerdict, CtfError> {
    check_valid(g)?;
    if g.role != Role::Closed {
        return Err(CtfError::Role {
            expected: Role::Closed,
            found: g.role,
        });
    }
    if g.edges.is_empty() {
        return Err(CtfError::Edgeless);
    }
    let betti = crate::homology::homology(g).betti;
    if betti != 0 {
        return Err(CtfError::NotQhs(betti));
    }
    let edge = g.edges.get(split_edge).ok_or(CtfError::NoEdge(split_edge))?;
    let u = SolidTorus::split(g, split_edge, edge.from);
    let v = SolidTorus::split(g, split_edge, edge.to);
    let tu = detect_tree(&u)?;
    let tv = detect_tree(&v)?;
    let back = edge.matrix.inverse();
    let dv = act_arc(&back, &tv.result.detected).expect("unimodular");
    let inter = arc_intersect(&tu.result.detected, &dv);
    let pick = inter.0.iter().filter_map(|a| a.simplest()).min_by_key(witness_key);
    let (admits, witness, lspace_note) = match pick {
        None => (false, None, "no gluing-coherent family of slopes exists".to_string()),
        Some(s) => {
            let mut w = SlopeAssignment::new();
            extract_into(&u, &tu, &s, &mut w)?;
            let s_to = act(&edge.matrix, &s).expect("unimodular");
            extract_into(&v, &tv, &s_to, &mut w)?;
            (
                true,
                Some(w),
                "admits a co-oriented taut foliation, hence is not an L-space".to_string(),
            )
        }
    };
    let mut piece_tags = BTreeMap::new();
    if let Some(w) = &witness {
        for (i, p) in g.pieces.iter().enumerate() {
            let slopes: Vec<Slope> = (0..p.boundary)
                .map(|k| w[&TorusSide { piece: i, index: k }].clone())
                .collect();
            piece_tags.insert(i, classify_piece(g, i, &slopes));
        }
    }
    Ok(CtfVerdict {
        admits,
        split_edge,
        witness,
        piece_tags,
        lspace_note,
        from_side: tu.result,
        to_side: tv.result,
    })
}

/// Checks gluing coherence: matrices carry slopes across every edge and each
/// piece's tuple is detected for every choice of target torus.
pub fn revalidate(g: &PlumbingGraph, w: &SlopeAssignment) -> Result<bool, CtfError> {
    for e in &g.edges {
        let (Some(a), Some(b)) = (w.get(&e.from), w.get(&e.to)) else {
            return Ok(false);
        };
        if act(&e.matrix, a).expect("unimodular") != *b {
            return Ok(false);
        }
    }
    for (i, p) in g.pieces.iter().enumerate() {
        let mut slopes = vec![];
        for k in 0..p.boundary {
            match w.get(&TorusSide { piece: i, index: k }) {
                Some(s) => slopes.push(s.clone()),
                None => return Ok(false),
            }
        }
        for t in 0..slopes.len() {
            if !tuple_detected_at(g, i, &slopes, t)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

//! Exact slope detection for graph manifold rational homology solid tori.

pub mod slope;

pub use slope::{act, act_arc, arc_intersect, delta, GluingMatrix, Rational, Slope, SlopeArc, SlopeSet};
pub mod ctf;
pub mod graph;
pub mod homology;
pub mod oracle;
pub mod random;
pub mod report;
pub mod seifert;

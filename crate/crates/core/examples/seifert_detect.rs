//! Detected slopes of a single Seifert piece relative to constraints on its
//! other boundary tori.

use std::collections::BTreeSet;

use slopefol::report::{detection_json, detection_text, render};
use slopefol::seifert::{certificate_holds, core_interval, detect_relative, ConstraintFamily, SeifertPiece};
use slopefol::slope::{rat, SlopeArc};

fn main() {
    // trefoil exterior: D^2(2, 3) with one boundary torus
    let trefoil = SeifertPiece::planar(vec![rat(1, 2), rat(1, 3)], 1).unwrap();
    let free = ConstraintFamily::empty();
    let d = detect_relative(&trefoil, &free).unwrap();
    print!("{}", detection_text("trefoil", &d, None));
    for c in d.low.iter().chain(&d.high) {
        println!("certificate holds: {}", certificate_holds(&trefoil, &free, c));
    }

    // a pair of pants over two cones with one strong constraint
    let piece = SeifertPiece::planar(vec![rat(1, 3), rat(2, 5)], 2).unwrap();
    let c = ConstraintFamily::new(
        vec![SlopeArc::tau_interval(&rat(-1, 4), &rat(3, 4))],
        BTreeSet::from([0]),
    )
    .unwrap();
    let (lo, hi) = core_interval(&piece, &c).unwrap();
    println!("core interval [{}, {}]", lo, hi);
    let d = detect_relative(&piece, &c).unwrap();
    print!("{}", render(&detection_json("pants", &d, None)));
}

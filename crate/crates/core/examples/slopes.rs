//! Slopes on a torus, the unimodular action and arcs of the slope circle.

use slopefol::report::arc_text;
use slopefol::slope::{act, act_arc, arc_intersect, delta, rat, GluingMatrix, Slope, SlopeArc};

fn main() {
    let s = Slope::from_pair(-3, 2).unwrap();
    println!("{} has tau {}", s, s.tau_string());
    println!(
        "fibre slope {} has tau {}",
        Slope::vertical(),
        Slope::vertical().tau_string()
    );

    let g = GluingMatrix::new(2, 1, 1, 0);
    println!("det {} sends {} to {}", g.det(), s, act(&g, &s).unwrap());
    println!(
        "delta({}, {}) = {}",
        s,
        Slope::vertical(),
        delta(&s, &Slope::vertical())
    );

    let a = SlopeArc::tau_interval(&rat(-1, 1), &rat(2, 1));
    let b = SlopeArc::arc(Slope::from_int_tau(1), Slope::from_int_tau(-3));
    println!(
        "[-1, 2] meets the arc from 1 through 1/0 to -3 in {}",
        arc_intersect(&a, &b)
            .0
            .iter()
            .map(arc_text)
            .collect::<Vec<_>>()
            .join(" and ")
    );
    println!("image of [-1, 2]: {}", arc_text(&act_arc(&g, &a).unwrap()));
    println!("simplest slope in [-1, 2]: {}", a.simplest().unwrap());
}

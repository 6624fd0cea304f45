//! Validation, first homology and rational longitudes of manifold files.

use slopefol::ctf::SolidTorus;
use slopefol::graph::{validate, PlumbingGraph, Role};
use slopefol::homology::homology;

fn main() {
    for name in [
        "n2.json",
        "trefoil_exterior.json",
        "order_two_pair.json",
        "trefoil_pair.json",
    ] {
        let path = format!("{}/examples/data/{}", env!("CARGO_MANIFEST_DIR"), name);
        let g = PlumbingGraph::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
        let diags = validate(&g);
        let h = homology(&g);
        println!(
            "{}: {} diagnostics, betti {}, torsion {:?}",
            name,
            diags.len(),
            h.betti,
            h.torsion
        );
        if g.role == Role::SolidTorus {
            let (l, order) = SolidTorus::new(&g).unwrap().longitude().unwrap();
            println!("  rational longitude {} [tau {}] of order {}", l, l.tau_string(), order);
        }
    }
}

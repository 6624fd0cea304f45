//! When the detected set is a single slope, and which branch says so.

use slopefol::ctf::{check_degenerate, extract_witness, SolidTorus};
use slopefol::graph::PlumbingGraph;

fn main() {
    for name in [
        "n2.json",
        "order_two_pair.json",
        "degenerate_tree.json",
        "trefoil_exterior.json",
    ] {
        let path = format!("{}/examples/data/{}", env!("CARGO_MANIFEST_DIR"), name);
        let g = PlumbingGraph::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
        let v = SolidTorus::new(&g).unwrap();
        let r = check_degenerate(&v).unwrap();
        println!("{}: {}", name, r.explanation);
        if r.is_point {
            let (l, _) = v.longitude().unwrap();
            for (side, s) in extract_witness(&v, &l).unwrap() {
                println!("  {} -> {}", g.side_name(side), s);
            }
        }
    }
}

//! Taut foliation decision for closed graph manifolds, with a gluing
//! coherent witness when one exists.

use slopefol::ctf::{decide_ctf, revalidate};
use slopefol::graph::PlumbingGraph;
use slopefol::report::ctf_text;

fn main() {
    for name in ["trefoil_pair.json", "trefoil_pair_disjoint.json", "pair_disjoint.json"] {
        let path = format!("{}/examples/data/{}", env!("CARGO_MANIFEST_DIR"), name);
        let g = PlumbingGraph::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
        let v = decide_ctf(&g, 0).unwrap();
        println!("== {}", name);
        print!("{}", ctf_text(&g, &v));
        if let Some(w) = &v.witness {
            println!("witness revalidates: {}", revalidate(&g, w).unwrap());
        }
    }
}

//! Detected slopes on the free torus of a plumbing tree, with the
//! exceptional strong-detection statuses.
//!
//! cargo run --example detect_tree -- crates/core/examples/data/fibre_exception.json

use slopefol::ctf::{detect_tree, SolidTorus};
use slopefol::graph::PlumbingGraph;
use slopefol::report::{arc_text, detection_text};

fn main() {
    let paths: Vec<String> = match std::env::args().nth(1) {
        Some(p) => vec![p],
        None => [
            "n2.json",
            "trefoil_exterior.json",
            "cable_exception.json",
            "fibre_exception.json",
        ]
        .iter()
        .map(|n| format!("{}/examples/data/{}", env!("CARGO_MANIFEST_DIR"), n))
        .collect(),
    };
    for path in paths {
        let g = PlumbingGraph::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let v = SolidTorus::new(&g).unwrap();
        let t = detect_tree(&v).unwrap();
        println!("== {}", path.rsplit('/').next().unwrap());
        for c in &t.children {
            println!("  child through edge {}: {}", c.edge, arc_text(&c.transported.detected));
        }
        print!("{}", detection_text(&g.side_name(v.root), &t.result, None));
    }
}

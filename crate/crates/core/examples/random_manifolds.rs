//! Random closed rational homology spheres: does every splitting edge give
//! the same answer?

use slopefol::ctf::decide_ctf;
use slopefol::homology::homology;
use slopefol::random::{closed_qhs, rng, TreeParams};

fn main() {
    let mut r = rng(3);
    let params = TreeParams::default();
    for i in 0..10 {
        let g = closed_qhs(&mut r, &params, 2);
        let answers: Vec<bool> = (0..g.edges.len()).map(|e| decide_ctf(&g, e).unwrap().admits).collect();
        let order: String = homology(&g).torsion.join(" x ");
        println!(
            "#{} pieces {} |H1| factors [{}] admits {:?}",
            i,
            g.pieces.len(),
            order,
            answers
        );
    }
}

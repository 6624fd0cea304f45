use std::time::{Duration, Instant};

use num_bigint::BigInt;
use slopefol::ctf::{check_degenerate, decide_ctf, detect_tree, revalidate, tuple_detected_at, SolidTorus};
use slopefol::graph::{Edge, Piece, PlumbingGraph, TorusSide};
use slopefol::oracle::{grid_denominator, grid_union, jn_exhaustive, oracle_interval, GridSpec};
use slopefol::random::{closed_qhs, rng, seifert_instance, solid_torus, unimodular, PieceParams, TreeParams};
use slopefol::report::arc_text;
use slopefol::seifert::{core_interval, detect_relative, ConstraintFamily, SeifertPiece, StrongStatus};
use slopefol::slope::{act_arc, rat, GluingMatrix, Slope, SlopeArc};

const SEIFERT_INSTANCES: usize = 1000;
const SEIFERT_BUDGET: Duration = Duration::from_secs(60);
const TREES: usize = 200;
const CLOSED: usize = 100;
const CLOSED_MIN_EDGES: usize = 2;
const REFRAMINGS: usize = 50;
const REFRAME_BOUND: i64 = 5;
const ORACLE_NMAX: i64 = 48;
const SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn data(name: &str) -> PlumbingGraph {
    let path = format!("{}/examples/data/{}", env!("CARGO_MANIFEST_DIR"), name);
    PlumbingGraph::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn trees() -> Vec<PlumbingGraph> {
    let mut r = rng(SEED);
    let params = TreeParams::default();
    (0..TREES).map(|_| solid_torus(&mut r, &params)).collect()
}

fn closed() -> Vec<PlumbingGraph> {
    let mut r = rng(SEED + 1);
    let params = TreeParams::default();
    (0..CLOSED)
        .map(|_| closed_qhs(&mut r, &params, CLOSED_MIN_EDGES))
        .collect()
}

fn count(failures: usize, total: usize, what: &str) -> Outcome {
    if failures == 0 {
        Ok(format!("{} {}", total, what))
    } else {
        Err(format!("{} of {} {} failed", failures, total, what))
    }
}

fn closed_form_equals_grid() -> Outcome {
    let mut r = rng(SEED);
    let params = PieceParams::default();
    let start = Instant::now();
    let mut failures = 0;
    for _ in 0..SEIFERT_INSTANCES {
        let (p, c) = seifert_instance(&mut r, &params);
        let spec = GridSpec::new(&c, &grid_denominator(&c)).unwrap();
        if grid_union(&p, &c, &spec) != Some(core_interval(&p, &c).unwrap()) {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    count(failures, SEIFERT_INSTANCES, "instances")?;
    if elapsed > SEIFERT_BUDGET {
        return Err(format!("took {:?}", elapsed));
    }
    Ok(format!("{} instances in {:.1?}", SEIFERT_INSTANCES, elapsed))
}

fn longitude_membership(trees: &[PlumbingGraph]) -> Outcome {
    let failures = trees
        .iter()
        .filter(|g| {
            let v = SolidTorus::new(g).unwrap();
            let (l, _) = v.longitude().unwrap();
            !detect_tree(&v).unwrap().result.contains(&l)
        })
        .count();
    count(failures, trees.len(), "trees")
}

fn n2_fixture() -> Outcome {
    let g = data("n2.json");
    let v = SolidTorus::new(&g).unwrap();
    let d = detect_tree(&v).unwrap().result;
    let (l, _) = v.longitude().unwrap();
    let h = Slope::vertical();
    if d.detected != SlopeArc::Point(h.clone()) || d.strong_status(&h) != Some(StrongStatus::Strong) {
        return Err(format!("detected {:?}", d.detected));
    }
    if l != h {
        return Err(format!("longitude {}", l));
    }
    Ok("D = D_str = {1/0}, longitude 1/0".to_string())
}

fn q_root(matrix: [[i64; 2]; 2]) -> PlumbingGraph {
    PlumbingGraph::from_json(&format!(
        r#"{{"role": "solid-torus", "pieces": [
            {{"id": "M", "base": {{"orientable": false, "crosscaps": 1}}, "cones": [[3, 1]], "b": 0, "boundary": 2}},
            {{"id": "C", "base": {{"orientable": true, "crosscaps": 0}}, "cones": [[2, 1], [3, 1]], "b": 0, "boundary": 1}}],
           "edges": [{{"from": ["C", 0], "to": ["M", 1], "matrix": {:?}}}]}}"#,
        matrix
    ))
    .unwrap()
}

fn q_base_dichotomy(trees: &[PlumbingGraph]) -> Outcome {
    let mut cases: Vec<(PlumbingGraph, bool)> = vec![
        (data("n2.json"), false),
        (q_root([[1, 0], [0, -1]]), false),
        (q_root([[-1, 1], [10, -9]]), true),
    ];
    for g in trees {
        if !g.pieces[0].orientable {
            let v = SolidTorus::new(g).unwrap();
            let t = detect_tree(&v).unwrap();
            let vertical = t.children.iter().any(|c| c.transported.detected.contains_vertical());
            cases.push((g.clone(), vertical));
        }
    }
    let mut failures = 0;
    for (g, vertical) in &cases {
        let d = detect_tree(&SolidTorus::new(g).unwrap()).unwrap().result.detected;
        let want = if *vertical {
            SlopeArc::Full
        } else {
            SlopeArc::Point(Slope::vertical())
        };
        if d != want {
            failures += 1;
        }
    }
    count(failures, cases.len(), "Q-base roots")
}

fn endpoint_exclusion(trees: &[PlumbingGraph]) -> Outcome {
    let mut arcs = 0;
    let mut failures = 0;
    for g in trees {
        let d = detect_tree(&SolidTorus::new(g).unwrap()).unwrap().result;
        if let SlopeArc::Arc(a, b) = &d.detected {
            arcs += 1;
            if d.strong_status(a) == Some(StrongStatus::Strong) || d.strong_status(b) == Some(StrongStatus::Strong) {
                failures += 1;
            }
        }
    }
    count(failures, arcs, "proper arcs")
}

fn splitting_invariance(closed: &[PlumbingGraph]) -> Outcome {
    let failures = closed
        .iter()
        .filter(|g| {
            let answers: Vec<bool> = (0..g.edges.len()).map(|e| decide_ctf(g, e).unwrap().admits).collect();
            answers.iter().any(|&a| a != answers[0])
        })
        .count();
    let admitting = closed.iter().filter(|g| decide_ctf(g, 0).unwrap().admits).count();
    count(failures, closed.len(), "closed manifolds").map(|s| format!("{}, {} admit", s, admitting))
}

fn witness_validity(closed: &[PlumbingGraph]) -> Outcome {
    let mut witnesses = 0;
    let mut failures = 0;
    let mut graphs: Vec<PlumbingGraph> = closed.to_vec();
    graphs.push(data("trefoil_pair.json"));
    for g in &graphs {
        for e in 0..g.edges.len() {
            let Some(w) = decide_ctf(g, e).unwrap().witness else {
                continue;
            };
            witnesses += 1;
            let pieces_ok = g.pieces.iter().enumerate().all(|(i, p)| {
                let slopes: Vec<Slope> = (0..p.boundary)
                    .map(|k| w[&TorusSide { piece: i, index: k }].clone())
                    .collect();
                (0..slopes.len()).all(|t| tuple_detected_at(g, i, &slopes, t).unwrap())
            });
            if !pieces_ok || !revalidate(g, &w).unwrap() {
                failures += 1;
            }
        }
    }
    count(failures, witnesses, "witnesses")
}

fn degenerate_cross_check(trees: &[PlumbingGraph]) -> Outcome {
    let mut graphs: Vec<PlumbingGraph> = trees.to_vec();
    for name in [
        "n2.json",
        "order_two_pair.json",
        "trefoil_exterior.json",
        "degenerate_tree.json",
        "cable_exception.json",
        "fibre_exception.json",
    ] {
        graphs.push(data(name));
    }
    let mut points = 0;
    let mut failures = 0;
    for g in &graphs {
        let r = check_degenerate(&SolidTorus::new(g).unwrap()).unwrap();
        points += r.is_point as usize;
        if !r.consistent {
            failures += 1;
        }
    }
    count(failures, graphs.len(), "trees").map(|s| format!("{}, {} points", s, points))
}

/// The same manifold with a product collar on the free torus whose outer
/// frame differs from the old one by `g`.
fn collar(graph: &PlumbingGraph, g: &GluingMatrix) -> PlumbingGraph {
    let mut out = graph.clone();
    let k = out.pieces.len();
    out.pieces.push(Piece {
        id: "collar".to_string(),
        orientable: true,
        crosscaps: 0,
        cones: vec![],
        b: BigInt::from(0),
        boundary: 2,
    });
    out.edges.push(Edge {
        from: TorusSide { piece: k, index: 1 },
        to: graph.dangling()[0],
        matrix: g.inverse().mul(&GluingMatrix::new(-1, 0, 0, 1)),
    });
    out
}

fn equivariance(trees: &[PlumbingGraph]) -> Outcome {
    let mut r = rng(SEED + 2);
    let mut failures = 0;
    for i in 0..REFRAMINGS {
        let base = &trees[i % trees.len()];
        let g = unimodular(&mut r, REFRAME_BOUND);
        let before = detect_tree(&SolidTorus::new(base).unwrap()).unwrap().result.detected;
        let moved = collar(base, &g);
        let v = SolidTorus::new(&moved).unwrap();
        if v.root.piece != base.pieces.len() {
            return Err("collar is not the root".to_string());
        }
        let after = detect_tree(&v).unwrap().result.detected;
        if after != act_arc(&g, &before).unwrap() {
            failures += 1;
        }
    }
    count(failures, REFRAMINGS, "reframings")
}

fn half_half_fixture() -> Outcome {
    let p = SeifertPiece::planar(vec![rat(1, 2), rat(1, 2)], 1).unwrap();
    let c = ConstraintFamily::empty();
    let d = detect_relative(&p, &c).unwrap();
    let want = SlopeArc::tau_interval(&rat(-2, 1), &rat(-1, 1));
    let interior = Slope::from_tau(&rat(-3, 2));
    let oracle = oracle_interval(&p, &c, ORACLE_NMAX);
    let below = jn_exhaustive(&p, &c, &rat(-2, 1), ORACLE_NMAX).is_none();
    let detail = format!(
        "detected {}, status at tau -3/2 {:?}, oracle interval {:?}, no certificate at -2: {}",
        arc_text(&d.detected),
        d.strong_status(&interior),
        oracle.as_ref().map(|(a, b)| format!("[{}, {}]", a, b)),
        below
    );
    let oracle_ok = oracle == Some((rat(-2, 1), rat(-1, 1)));
    let ok = d.detected == want && d.strong_status(&interior) == Some(StrongStatus::Strong) && oracle_ok;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let trees = trees();
    let closed = closed();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("closed form equals grid union", Box::new(closed_form_equals_grid)),
        ("longitude membership", Box::new(|| longitude_membership(&trees))),
        ("N2 fixture", Box::new(n2_fixture)),
        ("Q-base dichotomy", Box::new(|| q_base_dichotomy(&trees))),
        ("endpoint exclusion", Box::new(|| endpoint_exclusion(&trees))),
        ("splitting invariance", Box::new(|| splitting_invariance(&closed))),
        ("witness validity", Box::new(|| witness_validity(&closed))),
        ("degenerate cross-check", Box::new(|| degenerate_cross_check(&trees))),
        ("equivariance", Box::new(|| equivariance(&trees))),
        ("gamma (1/2, 1/2) fixture", Box::new(half_half_fixture)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {}: {}", i + 1, name, detail),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {}: {}", i + 1, name, detail);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

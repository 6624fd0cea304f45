use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use slopefol::ctf::{
    check_degenerate, classify_piece, decide_ctf, detect_tree, extract_witness, revalidate, tuple_detected_at,
    CtfError, PieceTag, SolidTorus,
};
use slopefol::graph::{normalize, validate, PlumbingGraph, TorusSide};
use slopefol::homology::{homology, smith};
use slopefol::random::{closed_qhs, rng, solid_torus, TreeParams};
use slopefol::seifert::StrongStatus;
use slopefol::slope::{rat, Slope, SlopeArc};

fn data(name: &str) -> PlumbingGraph {
    let path = format!("{}/examples/data/{}", env!("CARGO_MANIFEST_DIR"), name);
    PlumbingGraph::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// A root piece `M` with its second boundary glued to the free torus of `child`.
fn rooted_over(root: &str, child: &str, matrix: [[i64; 2]; 2]) -> PlumbingGraph {
    PlumbingGraph::from_json(&format!(
        r#"{{"role": "solid-torus", "pieces": [{}, {}],
           "edges": [{{"from": ["C", 0], "to": ["M", 1], "matrix": {:?}}}]}}"#,
        root, child, matrix
    ))
    .unwrap()
}

const N2_CHILD: &str =
    r#"{"id": "C", "base": {"orientable": false, "crosscaps": 1}, "cones": [], "b": 0, "boundary": 1}"#;

#[test]
fn homology_fixtures() {
    let h = homology(&data("n2.json"));
    assert_eq!((h.betti, h.torsion.clone()), (1, vec!["2".to_string()]));
    let h = homology(&data("trefoil_pair.json"));
    assert_eq!(h.betti, 0);
    let h = homology(&data("trefoil_exterior.json"));
    assert_eq!((h.betti, h.torsion.len()), (1, 0));
    let s = smith(
        &[
            vec![BigInt::from(4), BigInt::from(6)],
            vec![BigInt::from(6), BigInt::from(4)],
        ],
        2,
    );
    let t = s.torsion();
    assert_eq!(t, vec![BigInt::from(2), BigInt::from(10)]);
}

#[test]
fn longitudes() {
    let g = data("n2.json");
    let (l, order) = SolidTorus::new(&g).unwrap().longitude().unwrap();
    assert_eq!((l, order), (Slope::vertical(), BigInt::from(2)));
    let g = data("trefoil_exterior.json");
    let (l, order) = SolidTorus::new(&g).unwrap().longitude().unwrap();
    assert_eq!((l.tau(), order), (Some(rat(-5, 6)), BigInt::from(1)));
    let g = data("order_two_pair.json");
    let (l, order) = SolidTorus::new(&g).unwrap().longitude().unwrap();
    assert_eq!((l.tau(), order), (Some(rat(-1, 1)), BigInt::from(2)));
}

#[test]
fn normalize_keeps_invariants() {
    let mut r = rng(21);
    for _ in 0..40 {
        let g = solid_torus(&mut r, &TreeParams::default());
        let n = normalize(&g);
        assert_eq!(normalize(&n), n);
        let (h, k) = (homology(&g), homology(&n));
        assert_eq!((h.betti, h.torsion), (k.betti, k.torsion));
        let a = SolidTorus::new(&g).unwrap();
        let b = SolidTorus::new(&n).unwrap();
        assert_eq!(a.longitude().unwrap(), b.longitude().unwrap());
        assert_eq!(
            detect_tree(&a).unwrap().result.detected,
            detect_tree(&b).unwrap().result.detected
        );
    }
}

#[test]
fn validation_messages() {
    let mut g = data("trefoil_pair.json");
    assert!(validate(&g).is_empty());
    g.edges[0].matrix = slopefol::slope::GluingMatrix::new(1, 0, 0, 1);
    assert!(validate(&g)
        .iter()
        .any(|d| d.message.contains("orientation-incompatible")));
    let mut g = data("trefoil_pair.json");
    g.edges.push(g.edges[0].clone());
    assert!(validate(&g).iter().any(|d| d.message.contains("not a tree")));
}

#[test]
fn n2_detects_only_the_fibre() {
    let g = data("n2.json");
    let v = SolidTorus::new(&g).unwrap();
    let d = detect_tree(&v).unwrap().result;
    assert_eq!(d.detected, SlopeArc::Point(Slope::vertical()));
    assert_eq!(d.strong_status(&Slope::vertical()), Some(StrongStatus::Strong));
    let r = check_degenerate(&v).unwrap();
    assert!(r.is_point && r.consistent);
    assert_eq!(r.branch, "Q-base");
}

#[test]
fn order_two_pair_is_a_point() {
    let g = data("order_two_pair.json");
    let v = SolidTorus::new(&g).unwrap();
    let d = detect_tree(&v).unwrap().result;
    assert_eq!(d.detected, SlopeArc::Point(Slope::from_int_tau(-1)));
    let r = check_degenerate(&v).unwrap();
    assert!(r.is_point && r.consistent);
}

#[test]
fn trefoil_exterior_interval() {
    let g = data("trefoil_exterior.json");
    let v = SolidTorus::new(&g).unwrap();
    let d = detect_tree(&v).unwrap().result;
    assert_eq!(d.detected, SlopeArc::tau_interval(&rat(-1, 1), &rat(-4, 5)));
    assert_eq!(d.strong_status(&Slope::from_int_tau(-1)), Some(StrongStatus::NotStrong));
    assert_eq!(
        d.strong_status(&Slope::from_tau(&rat(-9, 10))),
        Some(StrongStatus::Strong)
    );
    let r = check_degenerate(&v).unwrap();
    assert!(!r.is_point && r.consistent);
}

#[test]
fn q_base_root() {
    let root =
        r#"{"id": "M", "base": {"orientable": false, "crosscaps": 1}, "cones": [[3, 1]], "b": 0, "boundary": 2}"#;
    let trefoil = r#"{"id": "C", "base": {"orientable": true, "crosscaps": 0}, "cones": [[2, 1], [3, 1]], "b": 0, "boundary": 1}"#;
    // child arc [-1, -4/5] pushed through a matrix that keeps it horizontal
    let g = rooted_over(root, trefoil, [[1, 0], [0, -1]]);
    let d = detect_tree(&SolidTorus::new(&g).unwrap()).unwrap().result;
    assert_eq!(d.detected, SlopeArc::Point(Slope::vertical()));
    assert!(check_degenerate(&SolidTorus::new(&g).unwrap()).unwrap().consistent);
    // and one that carries it across the fibre
    let g = rooted_over(root, trefoil, [[-1, 1], [10, -9]]);
    let v = SolidTorus::new(&g).unwrap();
    let t = detect_tree(&v).unwrap();
    assert!(t.children[0].transported.detected.contains_vertical());
    assert_eq!(t.result.detected, SlopeArc::Full);
    assert!(check_degenerate(&v).unwrap().consistent);
}

#[test]
fn vertical_longitude_branch() {
    let root = r#"{"id": "M", "base": {"orientable": true, "crosscaps": 0}, "cones": [[2, 1]], "b": 0, "boundary": 2}"#;
    let g = rooted_over(root, N2_CHILD, [[1, 0], [0, -1]]);
    let v = SolidTorus::new(&g).unwrap();
    let (l, _) = v.longitude().unwrap();
    assert!(l.is_vertical());
    let r = check_degenerate(&v).unwrap();
    assert_eq!(r.branch, "P-base, vertical longitude");
    assert!(r.consistent);
    assert!(r.is_point);
}

#[test]
fn cable_space_exception() {
    let g = data("cable_exception.json");
    let d = detect_tree(&SolidTorus::new(&g).unwrap()).unwrap().result;
    assert_eq!(d.detected, SlopeArc::Full);
    assert_eq!(
        d.strong_status(&Slope::from_int_tau(0)),
        Some(StrongStatus::Indeterminate)
    );
    assert_eq!(d.strong_status(&Slope::from_int_tau(1)), Some(StrongStatus::Strong));
}

#[test]
fn fibre_exception() {
    let g = data("fibre_exception.json");
    let v = SolidTorus::new(&g).unwrap();
    let d = detect_tree(&v).unwrap().result;
    let (l, _) = v.longitude().unwrap();
    assert_eq!(l.tau(), Some(rat(4, 3)));
    assert_eq!(d.detected, SlopeArc::tau_interval(&rat(1, 1), &rat(3, 2)));
    assert_eq!(d.strong_status(&l), Some(StrongStatus::Indeterminate));
}

#[test]
fn ctf_fixtures() {
    let g = data("trefoil_pair.json");
    let v = decide_ctf(&g, 0).unwrap();
    assert!(v.admits);
    let w = v.witness.as_ref().unwrap();
    assert_eq!(w[&TorusSide { piece: 0, index: 0 }], Slope::from_int_tau(-1));
    assert!(revalidate(&g, w).unwrap());
    assert_eq!(
        v.piece_tags.values().copied().collect::<Vec<_>>(),
        vec![PieceTag::HorizontalNonFibred; 2]
    );
    for name in ["trefoil_pair_disjoint.json", "pair_disjoint.json"] {
        let v = decide_ctf(&data(name), 0).unwrap();
        assert!(!v.admits && v.witness.is_none());
    }
}

#[test]
fn ctf_rejections() {
    assert!(matches!(decide_ctf(&data("n2.json"), 0), Err(CtfError::Role { .. })));
    // longitude glued to longitude
    let mut bad = data("pair_disjoint.json");
    bad.edges[0].matrix = slopefol::slope::GluingMatrix::new(0, 1, 1, 0);
    assert!(matches!(decide_ctf(&bad, 0), Err(CtfError::NotQhs(1))));
    let mut edgeless = data("n2.json");
    edgeless.role = slopefol::graph::Role::Closed;
    edgeless.pieces[0].boundary = 0;
    assert!(matches!(decide_ctf(&edgeless, 0), Err(CtfError::Edgeless)));
    assert!(matches!(
        decide_ctf(&data("trefoil_pair.json"), 3),
        Err(CtfError::NoEdge(3))
    ));
}

#[test]
fn witnesses() {
    let g = data("trefoil_exterior.json");
    let v = SolidTorus::new(&g).unwrap();
    let t = Slope::from_tau(&rat(-9, 10));
    let w = extract_witness(&v, &t).unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(w[&v.root], t);
    assert!(matches!(
        extract_witness(&v, &Slope::from_int_tau(0)),
        Err(CtfError::NotDetected(_))
    ));
    // longitude through a degenerate root lands on the child longitude
    let g = data("degenerate_tree.json");
    let v = SolidTorus::new(&g).unwrap();
    let (l, _) = v.longitude().unwrap();
    let r = check_degenerate(&v).unwrap();
    assert!(r.is_point && r.consistent && !l.is_vertical());
    let w = extract_witness(&v, &l).unwrap();
    let child = TorusSide { piece: 1, index: 0 };
    let (lc, _) = SolidTorus::split(&g, 0, child).longitude().unwrap();
    assert_eq!(w[&child], lc);
    let tuple = [w[&v.root].clone(), w[&TorusSide { piece: 0, index: 1 }].clone()];
    assert_eq!(classify_piece(&g, 0, &tuple), PieceTag::Fibration);
}

#[test]
fn piece_tags() {
    let g = data("trefoil_exterior.json");
    assert_eq!(classify_piece(&g, 0, &[Slope::vertical()]), PieceTag::VerticalAnnulus);
    assert_eq!(
        classify_piece(&g, 0, &[Slope::from_tau(&rat(-9, 10))]),
        PieceTag::HorizontalNonFibred
    );
    let (l, _) = SolidTorus::new(&g).unwrap().longitude().unwrap();
    assert!(!SolidTorus::new(&g).unwrap().longitude().unwrap().0.is_vertical());
    let p = data("order_two_pair.json");
    let (lp, _) = SolidTorus::new(&p).unwrap().longitude().unwrap();
    assert_eq!(classify_piece(&p, 0, &[lp]), PieceTag::Fibration);
    assert_ne!(classify_piece(&g, 0, &[l]), PieceTag::VerticalAnnulus);
}

fn tree() -> impl Strategy<Value = PlumbingGraph> {
    any::<u64>().prop_map(|s| solid_torus(&mut rng(s), &TreeParams::default()))
}

fn closed() -> impl Strategy<Value = PlumbingGraph> {
    any::<u64>().prop_map(|s| closed_qhs(&mut rng(s), &TreeParams::default(), 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tree_detection_invariants(g in tree()) {
        let v = SolidTorus::new(&g).unwrap();
        let d = detect_tree(&v).unwrap().result;
        let (l, _) = v.longitude().unwrap();
        prop_assert!(d.contains(&l));
        prop_assert!(!d.detected.is_empty());
        if let SlopeArc::Arc(a, b) = &d.detected {
            prop_assert_ne!(d.strong_status(a), Some(StrongStatus::Strong));
            prop_assert_ne!(d.strong_status(b), Some(StrongStatus::Strong));
        }
        let slopes: BTreeSet<String> = d.exceptions.iter().map(|e| e.slope.to_string()).collect();
        prop_assert_eq!(slopes.len(), d.exceptions.len());
        prop_assert!(check_degenerate(&v).unwrap().consistent);
    }

    #[test]
    fn witnesses_revalidate(g in tree()) {
        let v = SolidTorus::new(&g).unwrap();
        let d = detect_tree(&v).unwrap().result;
        for target in d.detected.endpoints().into_iter().chain(d.detected.simplest()) {
            let w = extract_witness(&v, &target).unwrap();
            for (i, p) in g.pieces.iter().enumerate() {
                let slopes: Vec<Slope> = (0..p.boundary).map(|k| w[&TorusSide { piece: i, index: k }].clone()).collect();
                for t in 0..slopes.len() {
                    prop_assert!(tuple_detected_at(&g, i, &slopes, t).unwrap());
                }
            }
        }
    }

    #[test]
    fn splitting_invariance(g in closed()) {
        let answers: Vec<bool> = (0..g.edges.len()).map(|e| decide_ctf(&g, e).unwrap().admits).collect();
        prop_assert!(answers.iter().all(|&a| a == answers[0]));
        for e in 0..g.edges.len() {
            if let Some(w) = decide_ctf(&g, e).unwrap().witness {
                prop_assert!(revalidate(&g, &w).unwrap());
            }
        }
    }
}

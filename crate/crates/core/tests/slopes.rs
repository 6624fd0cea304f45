use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use slopefol::slope::{act, act_arc, arc_intersect, delta, rat, GluingMatrix, Slope, SlopeArc};

fn small_matrix(det: i64) -> impl Strategy<Value = GluingMatrix> {
    (-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6)
        .prop_filter("determinant", move |(a, b, c, d)| a * d - b * c == det)
        .prop_map(|(a, b, c, d)| GluingMatrix::new(a, b, c, d))
}

fn unimodular() -> impl Strategy<Value = GluingMatrix> {
    prop_oneof![small_matrix(1), small_matrix(-1)]
}

fn slope() -> impl Strategy<Value = Slope> {
    (-30i64..=30, 0i64..=30)
        .prop_filter("nonzero", |(p, q)| *p != 0 || *q != 0)
        .prop_map(|(p, q)| Slope::from_pair(p, q).unwrap())
}

fn arc() -> impl Strategy<Value = SlopeArc> {
    prop_oneof![
        1 => Just(SlopeArc::Full),
        2 => slope().prop_map(SlopeArc::Point),
        6 => (slope(), slope()).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| SlopeArc::arc(a, b)),
    ]
}

/// Every slope with `|p| <= 64` and `q <= 8`: a grid on the circle.
fn grid() -> Vec<Slope> {
    let mut out = vec![Slope::vertical()];
    for q in 1..=8i64 {
        for p in -64..=64i64 {
            if p.gcd(&q) == 1 {
                out.push(Slope::from_pair(p, q).unwrap());
            }
        }
    }
    out
}

#[test]
fn canonical_pairs() {
    assert_eq!(Slope::from_pair(2, 4).unwrap(), Slope::from_pair(1, 2).unwrap());
    assert_eq!(Slope::from_pair(-3, 0).unwrap(), Slope::vertical());
    let s = Slope::from_pair(5, -10).unwrap();
    assert_eq!((s.p().clone(), s.q().clone()), (BigInt::from(-1), BigInt::from(2)));
    assert!(Slope::from_pair(0, 0).is_err());
    assert_eq!(Slope::from_pair(-3, 2).unwrap().tau(), Some(rat(3, 2)));
    assert_eq!(Slope::vertical().tau(), None);
    assert_eq!(Slope::from_int_tau(-2), Slope::from_pair(2, 1).unwrap());
}

#[test]
fn small_actions() {
    let s = Slope::from_pair(1, 2).unwrap();
    assert_eq!(act(&GluingMatrix::identity(), &s).unwrap(), s);
    let rot = GluingMatrix::new(0, -1, 1, 0);
    assert_eq!(act(&rot, &Slope::vertical()).unwrap(), Slope::from_pair(0, 1).unwrap());
    assert!(act(&GluingMatrix::new(2, 0, 0, 1), &s).is_err());
    assert_eq!(
        delta(&Slope::vertical(), &Slope::from_pair(0, 1).unwrap()),
        BigInt::from(1)
    );
    assert_eq!(
        delta(&Slope::from_pair(2, 3).unwrap(), &Slope::from_pair(1, 1).unwrap()),
        BigInt::from(1)
    );
}

#[test]
fn intersections_by_hand() {
    let full = SlopeArc::Full;
    assert_eq!(arc_intersect(&full, &full).0, vec![SlopeArc::Full]);
    let a = SlopeArc::tau_interval(&rat(0, 1), &rat(1, 1));
    let b = SlopeArc::tau_interval(&rat(1, 1), &rat(2, 1));
    assert_eq!(arc_intersect(&a, &b).0, vec![SlopeArc::Point(Slope::from_int_tau(1))]);
    // [2, -2] and [-1, 1] through the fibre, against [-3, 3]
    let wrap = SlopeArc::arc(Slope::from_int_tau(2), Slope::from_int_tau(-2));
    let mid = SlopeArc::tau_interval(&rat(-3, 1), &rat(3, 1));
    assert_eq!(arc_intersect(&wrap, &mid).0.len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonicalization_idempotent(s in slope()) {
        prop_assert_eq!(Slope::from_pair(s.p().clone(), s.q().clone()).unwrap(), s.clone());
        let text = s.to_string();
        prop_assert_eq!(text.parse::<Slope>().unwrap(), s);
    }

    #[test]
    fn tau_round_trip(s in slope()) {
        match s.tau() {
            Some(t) => prop_assert_eq!(Slope::from_tau(&t), s),
            None => prop_assert!(s.is_vertical()),
        }
    }

    #[test]
    fn act_is_a_group_action(g in unimodular(), h in unimodular(), s in slope()) {
        let gh = g.mul(&h);
        prop_assert_eq!(act(&gh, &s).unwrap(), act(&g, &act(&h, &s).unwrap()).unwrap());
        prop_assert_eq!(act(&g.inverse(), &act(&g, &s).unwrap()).unwrap(), s.clone());
        let image = act(&g, &s).unwrap();
        prop_assert!(image.p().gcd(image.q()) == BigInt::from(1));
    }

    #[test]
    fn act_arc_matches_pointwise(g in unimodular(), a in arc()) {
        let image = act_arc(&g, &a).unwrap();
        for x in grid() {
            prop_assert_eq!(a.contains(&x), image.contains(&act(&g, &x).unwrap()));
        }
    }

    #[test]
    fn intersection_is_exact(a in arc(), b in arc()) {
        let ab = arc_intersect(&a, &b);
        let ba = arc_intersect(&b, &a);
        prop_assert!(ab.0.len() <= 2);
        for x in grid() {
            let want = a.contains(&x) && b.contains(&x);
            prop_assert_eq!(ab.contains(&x), want);
            prop_assert_eq!(ba.contains(&x), want);
        }
        for piece in &ab.0 {
            for e in piece.endpoints() {
                prop_assert!(a.contains(&e) && b.contains(&e));
            }
        }
    }

    #[test]
    fn delta_symmetric(s in slope(), t in slope(), g in unimodular()) {
        prop_assert_eq!(delta(&s, &t), delta(&t, &s));
        prop_assert_eq!(delta(&s, &t) == BigInt::from(0), s == t);
        prop_assert_eq!(delta(&act(&g, &s).unwrap(), &act(&g, &t).unwrap()), delta(&s, &t));
    }
}

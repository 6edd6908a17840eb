//! Property tests: serialization round-trips, isomorphism invariants,
//! bracket algebra laws, and agreement between the decision ladder and the
//! closed-form classification.

use proptest::prelude::*;

use g2rig_core::cohomology::CochainBasis;
use g2rig_core::graph::{parse_graph6, serialize_graph6, Graph};
use g2rig_core::liealg::{bracket, graph_algebra, jacobi_check, two_step_check};
use g2rig_core::matrix::Rat;
use g2rig_core::rigidity::{
    classify_graph, expected_verdict, theorem_d_witness, verify_certificate, Method,
    RigidityStatus, RigidityVerdict,
};

fn graph_strategy(max_m: u32) -> impl Strategy<Value = Graph> {
    (1..=max_m).prop_flat_map(|m| {
        let pairs = (m * (m - 1) / 2) as usize;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 1..=m {
                for j in (i + 1)..=m {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::new(m, edges).expect("generated edges are valid")
        })
    })
}

fn graph_with_perm(max_m: u32) -> impl Strategy<Value = (Graph, Vec<u32>)> {
    graph_strategy(max_m).prop_flat_map(|g| {
        let m = g.num_vertices();
        let identity: Vec<u32> = (1..=m).collect();
        (Just(g), Just(identity).prop_shuffle())
    })
}

fn small_vector(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(-4i64..=4, n)
        .prop_map(|v| v.into_iter().map(|x| Rat::from_integer(x.into())).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn graph6_round_trips(g in graph_strategy(20)) {
        let encoded = serialize_graph6(&g).unwrap();
        let decoded = parse_graph6(&encoded).unwrap();
        prop_assert_eq!(decoded, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_key_is_an_isomorphism_invariant((g, perm) in graph_with_perm(6)) {
        let relabeled = g.relabel(&perm).unwrap();
        prop_assert_eq!(
            g.canonical_key().unwrap(),
            relabeled.canonical_key().unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn brackets_are_bilinear_and_antisymmetric(
        (g, x, y, z, a) in graph_strategy(5).prop_flat_map(|g| {
            let n = g.num_vertices() as usize + g.edge_count();
            (Just(g), small_vector(n), small_vector(n), small_vector(n), -3i64..=3)
        })
    ) {
        let sc = graph_algebra(&g);
        let xy = bracket(&sc, &x, &y).unwrap();
        let yx = bracket(&sc, &y, &x).unwrap();
        let neg: Vec<Rat> = yx.iter().map(|v| -v.clone()).collect();
        prop_assert_eq!(&xy, &neg);

        let scale = Rat::from_integer(a.into());
        let combined: Vec<Rat> = x
            .iter()
            .zip(&z)
            .map(|(u, w)| u + &scale * w)
            .collect();
        let lhs = bracket(&sc, &combined, &y).unwrap();
        let zy = bracket(&sc, &z, &y).unwrap();
        let rhs: Vec<Rat> = xy.iter().zip(&zy).map(|(u, w)| u + &scale * w).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graph_algebras_satisfy_the_axioms(g in graph_strategy(5)) {
        let sc = graph_algebra(&g);
        prop_assert!(jacobi_check(&sc));
        prop_assert!(two_step_check(&sc));
    }

    #[test]
    fn auto_ladder_agrees_with_the_classification_theorem(g in graph_strategy(5)) {
        let verdict = classify_graph(&g, Method::Auto);
        prop_assert_ne!(verdict.status, RigidityStatus::Undecided);
        prop_assert_eq!(verdict.status, expected_verdict(&g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn issued_witnesses_survive_verification(g in graph_strategy(4)) {
        if let Some(cert) = theorem_d_witness(&g) {
            let verdict = RigidityVerdict {
                status: RigidityStatus::NonRigid,
                certificate: Some(cert),
            };
            prop_assert!(verify_certificate(&g, &verdict).is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cochain_indices_round_trip(
        (n, a, b, c, d) in (2usize..=8).prop_flat_map(|n| {
            (Just(n), 1..=n, 1..=n, 1..=n, 1..=n)
        })
    ) {
        let cb = CochainBasis::new(n);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert_eq!(cb.c1_label(cb.c1_position(a, c)), (a, c));
        if lo != hi {
            let pos = cb.c2_position(lo, hi, c);
            prop_assert!(pos < cb.c2_dim());
            prop_assert_eq!(cb.c2_label(pos), (lo, hi, c));
            let tpos = cb.tangency_position(lo, hi, c, d);
            prop_assert!(tpos < cb.tangency_dim());
            prop_assert_eq!(cb.tangency_label(tpos), (lo, hi, c, d));
        }
        let mut t = [a, b, c];
        t.sort_unstable();
        if n >= 3 && t[0] < t[1] && t[1] < t[2] {
            let pos = cb.c3_position(t[0], t[1], t[2], d);
            prop_assert!(pos < cb.c3_dim());
            prop_assert_eq!(cb.c3_label(pos), (t[0], t[1], t[2], d));
        }
    }
}

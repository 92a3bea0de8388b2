use distinguish::counting::{count_closed, count_full_pie, count_mobius, PlainWeight};
use distinguish::families::shuffled;
use distinguish::{
    build_decomposition_tree, build_decomposition_tree_with, count_disconnected, distinguishing_number,
    distinguishing_polynomial, find_dist, oracle_counts, oracle_orbit_count, Analysis, AnalysisOptions, Context,
    DecompTree, Graph, TreeAnalysis, TreeDump, TriconnectOptions,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Graph on `1..=max_n` vertices from an edge bitmask.
fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn connected(max_n: usize) -> impl Strategy<Value = Graph> {
    graph(max_n).prop_filter("connected", Graph::is_connected)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn labelings_are_classes_times_automorphisms(g in connected(14), k in 0u64..7) {
        let r = find_dist(&g, k).unwrap();
        prop_assert_eq!(r.l, r.d * r.aut);
    }

    #[test]
    fn matches_brute_force_including_disconnected(g in graph(7), k in 1u64..=3) {
        let got = count_disconnected(&g, k).unwrap();
        let want = oracle_counts(&g, k, Context::Plain).unwrap();
        prop_assert_eq!(got.d, want.d);
        prop_assert_eq!(got.l, want.l);
        prop_assert_eq!(got.aut, BigUint::from(want.aut_order));
    }

    #[test]
    fn orbit_recount_agrees(g in connected(6), k in 1u64..=3) {
        prop_assert_eq!(oracle_orbit_count(&g, k).unwrap(), find_dist(&g, k).unwrap().d);
    }

    #[test]
    fn zero_set_is_an_initial_segment(g in graph(9)) {
        let number = distinguishing_number(&g).unwrap();
        let a = Analysis::new(&g).unwrap();
        let mut prev = BigUint::from(0u32);
        for k in 0..=number + 2 {
            let d = a.count(k).unwrap().d;
            prop_assert!(d >= prev, "D decreased at k={}", k);
            prop_assert_eq!(d == BigUint::from(0u32), k < number, "k={} number={}", k, number);
            prev = d;
        }
    }

    #[test]
    fn invariant_under_relabeling(g in graph(10), seed in any::<u64>(), k in 1u64..6) {
        let h = shuffled(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        let a = count_disconnected(&g, k).unwrap();
        let b = count_disconnected(&h, k).unwrap();
        prop_assert_eq!((a.l, a.d, a.aut), (b.l, b.d, b.aut));
    }

    #[test]
    fn split_order_does_not_matter(g in connected(12), seed in any::<u64>()) {
        let opts = AnalysisOptions {
            triconnect: TriconnectOptions { seed: Some(seed) },
            ..AnalysisOptions::default()
        };
        let seeded = TreeAnalysis::with_options(&g, opts).unwrap();
        let plain = TreeAnalysis::new(&g).unwrap();
        for k in [2u64, 5] {
            prop_assert_eq!(seeded.count(k).unwrap().d, plain.count(k).unwrap().d);
        }
    }

    #[test]
    fn polynomial_reproduces_counts(g in connected(7)) {
        let p = distinguishing_polynomial(&g).unwrap();
        let r1 = find_dist(&g, 1).unwrap();
        prop_assert_eq!(p.degree(), g.n());
        prop_assert_eq!(p.coeffs()[0].clone(), BigRational::from(BigInt::from(0)));
        let lead = BigRational::new(BigInt::from(1), BigInt::from(r1.aut.clone()));
        prop_assert_eq!(p.coeffs()[g.n()].clone(), lead);
        for k in 0..=g.n() as u64 + 4 {
            let d = find_dist(&g, k).unwrap().d;
            prop_assert_eq!(p.eval(&BigInt::from(k)), BigRational::from(BigInt::from(d)));
        }
    }

    #[test]
    fn engines_agree_on_component_groups(g in connected(9), k in 1u64..=4) {
        let t = TreeAnalysis::new(&g).unwrap();
        for (group, _) in t.component_groups() {
            let w = PlainWeight::new(group.degree(), k);
            let mobius = count_mobius(group, &w, 360).unwrap();
            prop_assert_eq!(&count_closed(group, &w, 5000).unwrap(), &mobius);
            if group.order() <= 16 {
                prop_assert_eq!(&count_full_pie(group, &w, 16).unwrap(), &mobius);
            }
        }
    }

    #[test]
    fn cross_checked_pipeline_agrees(g in connected(10), k in 1u64..=4) {
        let opts = AnalysisOptions { cross_check: true, ..AnalysisOptions::default() };
        let checked = TreeAnalysis::with_options(&g, opts).unwrap().count(k).unwrap();
        prop_assert_eq!(checked.d, find_dist(&g, k).unwrap().d);
    }

    #[test]
    fn tree_dump_round_trips(g in connected(12), seed in any::<u64>()) {
        let tree = build_decomposition_tree_with(&g, TriconnectOptions { seed: Some(seed) }).unwrap();
        let json = serde_json::to_string(&tree.to_dump()).unwrap();
        let dump: TreeDump = serde_json::from_str(&json).unwrap();
        let back = DecompTree::from_dump(&dump).unwrap();
        prop_assert_eq!(&back, &tree);
        let direct = TreeAnalysis::new(&g).unwrap().count(3).unwrap();
        let rebuilt = TreeAnalysis::from_tree(back, AnalysisOptions::default()).unwrap().count(3).unwrap();
        prop_assert_eq!(direct.d, rebuilt.d);
    }

    #[test]
    fn every_vertex_and_edge_is_covered(g in connected(12)) {
        let tree = build_decomposition_tree(&g).unwrap();
        let mut seen = vec![false; g.n()];
        let mut real = std::collections::BTreeSet::new();
        for node in &tree.nodes {
            for v in node.bag() {
                seen[v] = true;
            }
            if let Some(c) = node.component() {
                for e in c.graph.edges().iter().filter(|e| !e.tag.is_virtual()) {
                    prop_assert!(real.insert(e.key()), "edge {:?} appears twice", e.key());
                }
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert_eq!(real.len(), g.m());
    }
}

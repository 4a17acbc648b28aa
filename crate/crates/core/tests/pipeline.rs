//! Cross-module properties: random-corpus invariants tying the graph
//! primitives, detectors, oracles, decomposition, pipelines, and verifier
//! together.

use proptest::prelude::*;

use broomchi::certify::{verify, CertifiedResult, Verdict};
use broomchi::colorer::{color_chair_free, color_tbroom_free_with_stats};
use broomchi::decompose::{find_max_q, partition_neighborhood_alpha, validate_lemmas};
use broomchi::detect::{
    find_independent_in, find_induced_tbroom, verify_broom, BroomWitness,
};
use broomchi::graph::{
    components, distance_layers, greedy_color, induced_subgraph, degeneracy_order, palette, Graph,
    VertexSet,
};
use broomchi::oracle::{chromatic_number, clique_number, independence_number};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::new(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layers_partition_vertices(g in graph_strategy(12), source in 0usize..12) {
        let source = source % g.n();
        let s = VertexSet::from_iter(g.n(), [source]);
        let layers = distance_layers(&g, &s).unwrap();
        let mut seen = s.clone();
        for layer in &layers.layers {
            prop_assert!(seen.is_disjoint(layer));
            seen = seen.union(layer);
        }
        prop_assert!(seen.is_disjoint(&layers.residue));
        prop_assert_eq!(seen.union(&layers.residue), g.vertex_set());
        // each layer sits inside the neighborhood of the previous one
        let mut prev = s;
        for layer in &layers.layers {
            prop_assert!(layer.is_subset(&g.set_neighborhood(&prev)));
            prev = layer.clone();
        }
    }

    #[test]
    fn greedy_is_proper_and_degeneracy_tight(g in graph_strategy(12)) {
        let (order, d) = degeneracy_order(&g);
        let coloring = greedy_color(&g, &order, &palette(0, d + 1)).unwrap();
        prop_assert!(coloring.check_proper(&g).is_ok());
        prop_assert!(coloring.colors_used() <= d + 1);
    }

    #[test]
    fn components_commute_with_induced_subgraph(g in graph_strategy(12), mask in any::<u16>()) {
        let s = VertexSet::from_iter(g.n(), (0..g.n()).filter(|v| mask >> v & 1 == 1));
        let direct = components(&g, &s);
        let (sub, map) = induced_subgraph(&g, &s).unwrap();
        let relabeled: Vec<VertexSet> = components(&sub, &sub.vertex_set())
            .into_iter()
            .map(|c| VertexSet::from_iter(g.n(), c.iter().map(|v| map[v])))
            .collect();
        prop_assert_eq!(direct, relabeled);
    }

    #[test]
    fn omega_chi_sandwich(g in graph_strategy(10)) {
        let (w, clique) = clique_number(&g);
        prop_assert!(g.is_clique(&clique));
        let (chi, coloring) = chromatic_number(&g).unwrap();
        prop_assert!(coloring.check_proper(&g).is_ok());
        prop_assert_eq!(coloring.colors_used(), chi);
        prop_assert!(w <= chi && chi <= g.n());
        prop_assert_eq!(w, independence_number(&g.complement()).0);
    }

    #[test]
    fn detector_witnesses_verify(g in graph_strategy(10)) {
        if let Some(w) = find_induced_tbroom(&g, 2).unwrap() {
            prop_assert!(verify_broom(&g, &w));
        }
        if let Some(set) = find_independent_in(&g, &g.vertex_set(), 3) {
            prop_assert!(g.is_independent(&set));
            prop_assert_eq!(set.len(), 3);
        }
    }

    #[test]
    fn hereditary_detection(g in graph_strategy(9), drop in 0usize..9) {
        if find_induced_tbroom(&g, 2).unwrap().is_none() && g.n() > 1 {
            let mut keep = g.vertex_set();
            keep.remove(drop % g.n());
            let (sub, _) = induced_subgraph(&g, &keep).unwrap();
            prop_assert!(find_induced_tbroom(&sub, 2).unwrap().is_none());
        }
    }

    #[test]
    fn pipeline_dichotomy_on_random_graphs(g in graph_strategy(11)) {
        // every graph either colors within the chair bound or yields a
        // verified chair, and the verifier accepts either way
        let cert = color_chair_free(&g).unwrap();
        match cert.verdict {
            Verdict::Colored => {
                prop_assert!(cert.colors_used() as u64 <= cert.bound);
            }
            Verdict::NotInClass => {
                prop_assert!(cert.witness.is_some());
            }
        }
        let report = verify(&g, &cert).unwrap();
        prop_assert!(report.accepted, "{:?}", report.failures);
        // serialize, parse, verify again: identical outcome
        let back = CertifiedResult::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(verify(&g, &back).unwrap().accepted);
    }

    #[test]
    fn validators_silent_on_detector_clean_graphs(g in graph_strategy(10)) {
        if find_induced_tbroom(&g, 2).unwrap().is_some() {
            return Ok(());
        }
        if let Some(q) = find_max_q(&g, 2).unwrap() {
            let part = partition_neighborhood_alpha(&g, &q);
            let violations = validate_lemmas(&g, 2, &q, &part).unwrap();
            prop_assert!(violations.is_empty(), "{:?}", violations);
        }
    }
}

#[test]
fn general_pipeline_tracks_recursion_shrinkage() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut colored = 0;
    for _ in 0..30 {
        let n = rng.gen_range(6..=16);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.55) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &edges).unwrap();
        let (cert, stats) = color_tbroom_free_with_stats(&g, 3).unwrap();
        assert_eq!(stats.shrink_violations, 0);
        if cert.verdict == Verdict::Colored {
            colored += 1;
            assert!(verify(&g, &cert).unwrap().accepted);
        }
    }
    assert!(colored > 0, "corpus never exercised the colored path");
}

#[test]
fn mapped_witness_survives_subgraph_lift() {
    // find a chair inside an induced subgraph and lift it to the host
    let host = {
        let mut edges = vec![(0, 1), (1, 2), (0, 3), (0, 4)];
        edges.push((5, 6));
        edges.push((5, 0));
        Graph::new(7, &edges).unwrap()
    };
    let keep = VertexSet::from_iter(7, [0, 1, 2, 3, 4]);
    let (sub, map) = induced_subgraph(&host, &keep).unwrap();
    let w = find_induced_tbroom(&sub, 2).unwrap().unwrap();
    let lifted: BroomWitness = w.mapped(&map);
    assert!(verify_broom(&host, &lifted));
}

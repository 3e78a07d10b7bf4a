//! The pruned, symmetry-reduced, parallel search against a reference that
//! has none of those: every assignment, every weight vector, distances by
//! Floyd–Warshall, feasibility by block enumeration.

use pcglab_core::{Graph, SearchConfig, batch_certify, search_escalating, search_witness, verify_witness};
use pcglab_testkit::{all_labeled_graphs, exhaustive_feasible, nonisomorphic_graphs};

fn feasible_by_search(g: &Graph, k: usize, max_weight: u64) -> bool {
    let out = search_witness(g, &SearchConfig::new(k, max_weight)).unwrap();
    match &out.witness {
        Some(w) => {
            assert!(verify_witness(g, w).unwrap().pass);
            assert!(w.intervals.len() <= k);
            true
        }
        None => {
            assert!(out.exhausted, "no witness but space not exhausted");
            false
        }
    }
}

#[test]
fn all_labeled_three_node_graphs_agree_with_the_reference() {
    for g in all_labeled_graphs(3) {
        for max_weight in [1, 2] {
            for k in [1, 2] {
                assert_eq!(
                    feasible_by_search(&g, k, max_weight),
                    exhaustive_feasible(&g, k, 1, max_weight),
                    "graph {} k={k} W={max_weight}",
                    g.encode_graph6()
                );
            }
        }
    }
}

#[test]
fn all_labeled_four_node_graphs_agree_at_weight_two() {
    for g in all_labeled_graphs(4) {
        assert_eq!(
            feasible_by_search(&g, 1, 2),
            exhaustive_feasible(&g, 1, 1, 2),
            "graph {}",
            g.encode_graph6()
        );
    }
}

#[test]
fn four_node_classes_agree_at_two_intervals() {
    for g in nonisomorphic_graphs(4) {
        assert_eq!(
            feasible_by_search(&g, 2, 2),
            exhaustive_feasible(&g, 2, 1, 2),
            "graph {}",
            g.encode_graph6()
        );
    }
}

#[test]
fn witnesses_are_identical_across_worker_counts() {
    for g in [Graph::cycle(4).unwrap(), Graph::cycle(5).unwrap()] {
        let mut cfg = SearchConfig::new(1, 4);
        let baseline = search_witness(&g, &cfg).unwrap().witness.map(|w| w.to_json());
        for workers in [2, 3, 8] {
            cfg.workers = workers;
            let got = search_witness(&g, &cfg).unwrap().witness.map(|w| w.to_json());
            assert_eq!(baseline, got, "workers = {workers}");
        }
    }
}

#[test]
fn batch_matches_individual_searches() {
    let graphs: Vec<Graph> = nonisomorphic_graphs(4);
    let cfg = SearchConfig::new(1, 2);
    let batch = batch_certify(&graphs, &cfg);
    assert_eq!(batch.len(), graphs.len());
    for (g, result) in graphs.iter().zip(batch) {
        let single = search_witness(g, &cfg).unwrap();
        let outcome = result.unwrap();
        assert_eq!(single.witness.is_some(), outcome.witness.is_some());
        assert_eq!(single.exhausted, outcome.exhausted);
        if let (Some(a), Some(b)) = (&single.witness, &outcome.witness) {
            assert_eq!(a.to_json(), b.to_json());
        }
    }
}

#[test]
fn escalation_stops_at_the_cap_and_reports_honestly() {
    // the 5-cycle is infeasible at unit weights for any interval count
    let c5 = Graph::cycle(5).unwrap();
    let mut cfg = SearchConfig::new(1, 1);
    cfg.min_weight = 1;
    let (out, bound) = search_escalating(&c5, &cfg).unwrap();
    assert_eq!(bound, 1);
    assert!(out.witness.is_none());
    assert!(out.exhausted);

    // raising the cap lets the schedule walk upward and succeed
    let mut cfg = SearchConfig::new(1, 64);
    cfg.min_weight = 1;
    let (out, bound) = search_escalating(&c5, &cfg).unwrap();
    assert!(out.witness.is_some(), "C5 should be found by weight {bound}");
    assert!(verify_witness(&c5, out.witness.as_ref().unwrap()).unwrap().pass);
}

#[test]
fn found_witnesses_use_enumerated_shapes() {
    // the witness tree, stripped to its shape, is one of the full binary
    // shapes for that leaf count
    let g = Graph::cycle(5).unwrap();
    let out = search_witness(&g, &SearchConfig::new(2, 3)).unwrap();
    let w = out.witness.expect("C5 at k=2 within weight 3");
    assert!(w.tree.is_full_binary_unrooted());
    assert_eq!(w.tree.leaf_count(), 5);
}

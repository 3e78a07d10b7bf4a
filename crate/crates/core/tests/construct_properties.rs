//! The two-interval construction pipeline across every small graph class:
//! whenever a special node exists the pipeline must emit a verified witness
//! with at most two intervals, and the recorded trace must be internally
//! consistent with the produced tree.

use pcglab_core::{
    ConstructError, Graph, Route, SearchConfig, construct_two_interval_witness,
    normalize_base_witness, search_escalating, verify_witness,
};
use pcglab_testkit::nonisomorphic_graphs;

fn has_candidate(g: &Graph) -> bool {
    !g.universal_nodes().is_empty() || !g.almost_universal_nodes().is_empty()
}

#[test]
fn every_small_graph_with_a_candidate_gets_a_verified_witness() {
    let cfg = SearchConfig::new(2, 8);
    let mut constructed = 0usize;
    let mut without_candidate = 0usize;
    for n in 2..=5 {
        for g in nonisomorphic_graphs(n) {
            match construct_two_interval_witness(&g, None, None, &cfg) {
                Ok(trace) => {
                    assert!(has_candidate(&g), "graph {}", g.encode_graph6());
                    let report = verify_witness(&g, &trace.witness).unwrap();
                    assert!(report.pass, "graph {}: {:?}", g.encode_graph6(), report);
                    assert!(trace.witness.intervals.len() <= 2);
                    assert_eq!(trace.witness.tree.leaf_count(), n);
                    assert_eq!(trace.witness.assignment.len(), n);
                    constructed += 1;
                }
                Err(ConstructError::NoCandidate) => {
                    assert!(!has_candidate(&g), "graph {}", g.encode_graph6());
                    without_candidate += 1;
                }
                Err(other) => panic!("graph {}: {other}", g.encode_graph6()),
            }
        }
    }
    assert_eq!(constructed + without_candidate, 2 + 4 + 11 + 34);
    assert!(constructed > 0);
    assert!(without_candidate > 0, "C5 among others has no special node");
}

#[test]
fn six_node_wheel_goes_through_the_universal_route() {
    // hub-and-cycle: node 5 adjacent to all of the 5-cycle 0..4
    let mut g = Graph::new(6).unwrap();
    for v in 0..5 {
        g.add_edge(v, (v + 1) % 5).unwrap();
        g.add_edge(v, 5).unwrap();
    }
    let cfg = SearchConfig::new(2, 8);
    let trace = construct_two_interval_witness(&g, None, None, &cfg).unwrap();
    assert_eq!(trace.route, Route::Universal { u: 5 });
    assert_eq!(trace.stages.len(), 1);
    assert_eq!(trace.stages[0].0, "attach");
    assert!(trace.attach_node.is_some());
    assert!(verify_witness(&g, &trace.witness).unwrap().pass);
    // the far interval of the lift is pinned to the base diameter
    let intervals = trace.witness.intervals.intervals();
    assert_eq!(intervals.last().copied(), Some((trace.p + 1, 2 * trace.p + 1)));
}

#[test]
fn six_node_octahedron_goes_through_the_almost_universal_route() {
    // K_{2,2,2}: complete minus the perfect matching (0,1),(2,3),(4,5)
    let mut g = Graph::new(6).unwrap();
    for a in 0..6 {
        for b in (a + 1)..6 {
            if !(b == a + 1 && a % 2 == 0) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    let cfg = SearchConfig::new(2, 8);
    let trace = construct_two_interval_witness(&g, None, None, &cfg).unwrap();
    assert_eq!(trace.route, Route::AlmostUniversal { u: 0, v: 1 });
    let names: Vec<&str> = trace.stages.iter().map(|(s, _)| *s).collect();
    assert_eq!(names, ["stretch", "split", "attach"]);
    assert!(trace.c.is_some());
    assert!(trace.attach_node.is_some());
    assert!(verify_witness(&g, &trace.witness).unwrap().pass);

    // the lifted pair distance sits strictly between the two intervals
    let dm = trace.witness.tree.leaf_distance_matrix();
    let d_uv = dm
        .by_label(&trace.witness.assignment[&0], &trace.witness.assignment[&1])
        .unwrap();
    assert_eq!(d_uv, trace.p + 1);
    let intervals = trace.witness.intervals.intervals();
    assert_eq!(intervals.last().copied(), Some((trace.p + 2, 2 * trace.p)));
    assert!(intervals[0].1 < d_uv && d_uv < intervals[1].0);
}

#[test]
fn almost_universal_trace_stage_trees_chain_together() {
    let g = Graph::cycle(4).unwrap();
    let cfg = SearchConfig::new(2, 8);
    let trace = construct_two_interval_witness(&g, None, None, &cfg).unwrap();
    let base = trace.base.as_ref().expect("searched base is recorded");

    let (stretch_name, stretched) = &trace.stages[0];
    assert_eq!(*stretch_name, "stretch");
    // stretching adds 2 to every leaf edge, so all leaf distances grow by 4
    let before = base.tree.leaf_distance_matrix();
    let after = stretched.leaf_distance_matrix();
    for a in before.labels() {
        for b in before.labels() {
            if a != b {
                assert_eq!(
                    after.by_label(a, b).unwrap(),
                    before.by_label(a, b).unwrap() + 4
                );
            }
        }
    }
    assert_eq!(after.max(), trace.p);

    let (split_name, split) = &trace.stages[1];
    assert_eq!(*split_name, "split");
    assert_eq!(split.node_count(), stretched.node_count() + 1);
    // splitting is metric-neutral on the original leaves
    let split_dm = split.leaf_distance_matrix();
    for a in after.labels() {
        for b in after.labels() {
            if a != b {
                assert_eq!(split_dm.by_label(a, b), after.by_label(a, b));
            }
        }
    }

    let (attach_name, attached) = &trace.stages[2];
    assert_eq!(*attach_name, "attach");
    assert_eq!(attached.node_count(), split.node_count() + 1);
    assert!(attached.structurally_equal(&trace.witness.tree));
}

#[test]
fn normalization_is_idempotent_on_searched_bases() {
    let cfg = SearchConfig::new(1, 4);
    for n in 3..=5 {
        for g in nonisomorphic_graphs(n) {
            let (outcome, _) = search_escalating(&g, &cfg).unwrap();
            let Some(w) = outcome.witness else { continue };
            let once = normalize_base_witness(&g, &w).unwrap();
            assert!(verify_witness(&g, &once).unwrap().pass);
            let twice = normalize_base_witness(&g, &once).unwrap();
            assert_eq!(once.to_json(), twice.to_json(), "graph {}", g.encode_graph6());
        }
    }
}

#[test]
fn explicit_routes_and_caller_bases_are_respected() {
    let g = Graph::complete(3).unwrap();
    let cfg = SearchConfig::new(2, 4);

    // ask for a specific universal node instead of the lowest
    let trace =
        construct_two_interval_witness(&g, Some(Route::Universal { u: 2 }), None, &cfg).unwrap();
    assert_eq!(trace.route, Route::Universal { u: 2 });
    assert!(verify_witness(&g, &trace.witness).unwrap().pass);

    // hand over a base witness for the reduced graph and check it is used
    let base_graph = g.remove_node(2).unwrap();
    let base = pcglab_core::search_witness(&base_graph, &SearchConfig::new(1, 3))
        .unwrap()
        .witness
        .unwrap();
    let trace =
        construct_two_interval_witness(&g, Some(Route::Universal { u: 2 }), Some(&base), &cfg)
            .unwrap();
    let recorded = trace.base.as_ref().unwrap();
    assert_eq!(
        recorded.tree.leaf_distance_matrix().max(),
        base.tree.leaf_distance_matrix().max(),
        "normalization keeps the base diameter"
    );
    assert!(verify_witness(&g, &trace.witness).unwrap().pass);
}

#[test]
fn invalid_routes_are_rejected_with_the_right_error() {
    let c4 = Graph::cycle(4).unwrap();
    assert!(matches!(
        construct_two_interval_witness(&c4, Some(Route::Universal { u: 0 }), None, &SearchConfig::new(2, 4)),
        Err(ConstructError::NotUniversal(0))
    ));
    assert!(matches!(
        construct_two_interval_witness(
            &c4,
            Some(Route::AlmostUniversal { u: 0, v: 1 }),
            None,
            &SearchConfig::new(2, 4)
        ),
        Err(ConstructError::NotAlmostUniversal { u: 0, v: 1 })
    ));
}

#[test]
fn graphs_without_candidates_report_no_candidate() {
    for g in [Graph::cycle(5).unwrap(), Graph::cycle(6).unwrap()] {
        assert!(matches!(
            construct_two_interval_witness(&g, None, None, &SearchConfig::new(2, 4)),
            Err(ConstructError::NoCandidate)
        ));
    }
}

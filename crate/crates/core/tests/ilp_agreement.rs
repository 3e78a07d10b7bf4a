//! Exported integer models against ground truth. The models are solved by
//! an independent LP-format parser and exhaustive integer enumeration, and
//! their verdicts compared with direct weight enumeration on the same
//! shape. Feasible models must also round-trip into verified witnesses.

use std::collections::BTreeMap;

use pcglab_core::{
    Graph, IlpOptions, LeafAssignment, Topology, Witness, enumerate_topologies, export_ilp,
    extract_intervals, verify_witness,
};
use pcglab_testkit::lp::{brute_force_solve, parse_lp};
use pcglab_testkit::{brute_force_intervals, distance_value_sets, nonisomorphic_graphs};

/// node → leaf-label map induced by an assignment on this shape.
fn assignment_map(topo: &Topology, asg: &LeafAssignment) -> BTreeMap<usize, String> {
    let tree = topo.tree();
    (0..asg.len())
        .map(|node| {
            let leaf = topo.leaf_node(asg.slot_of(node));
            (node, tree.label(leaf).unwrap().to_string())
        })
        .collect()
}

/// Reference verdict: enumerate every weight vector on the shape and ask the
/// block oracle whether k intervals separate the value sets.
fn reference_feasible(
    g: &Graph,
    topo: &Topology,
    asg: &LeafAssignment,
    k: usize,
    min_w: u64,
    max_w: u64,
) -> bool {
    let map = assignment_map(topo, asg);
    let e = topo.tree().edge_count();
    let mut weights = vec![min_w; e];
    loop {
        let t = topo.tree().with_weights(&weights).unwrap();
        let (de, dn) = distance_value_sets(g, &t, &map);
        if brute_force_intervals(&de, &dn, k).is_some() {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == e {
                return false;
            }
            if weights[pos] < max_w {
                weights[pos] += 1;
                break;
            }
            weights[pos] = min_w;
            pos += 1;
        }
    }
}

/// LP verdict via the independent parser and integer enumerator.
fn lp_solution(
    g: &Graph,
    topo: &Topology,
    asg: Option<&LeafAssignment>,
    opts: &IlpOptions,
    limit: u64,
) -> Option<BTreeMap<String, i64>> {
    let text = export_ilp(g, topo, asg, opts).unwrap();
    let model = parse_lp(&text).unwrap();
    brute_force_solve(&model, limit).unwrap()
}

/// Rebuild a witness from the solved edge weights and verify it.
fn check_solution_becomes_witness(
    g: &Graph,
    topo: &Topology,
    asg: &LeafAssignment,
    k: usize,
    solution: &BTreeMap<String, i64>,
) {
    let e = topo.tree().edge_count();
    let weights: Vec<u64> = (0..e)
        .map(|i| solution[&format!("w_{i}")] as u64)
        .collect();
    let tree = topo.tree().with_weights(&weights).unwrap();
    let map = assignment_map(topo, asg);
    let intervals = extract_intervals(g, &tree, &map, k)
        .unwrap()
        .expect("solved weights admit a k-interval separation");
    let witness = Witness {
        tree,
        assignment: map,
        intervals,
    };
    assert!(verify_witness(g, &witness).unwrap().pass);
}

#[test]
fn fixed_assignment_verdicts_match_direct_enumeration() {
    let star = enumerate_topologies(3).unwrap().remove(0);
    let identity = LeafAssignment::identity(3);
    let mut feasible = 0usize;
    let mut infeasible = 0usize;
    for g in nonisomorphic_graphs(3) {
        for k in [1, 2] {
            for max_weight in [1, 2] {
                let opts = IlpOptions::new(k, max_weight);
                let solution = lp_solution(&g, &star, Some(&identity), &opts, 16_000_000);
                let expected = reference_feasible(&g, &star, &identity, k, 1, max_weight);
                assert_eq!(
                    solution.is_some(),
                    expected,
                    "graph {} k={k} W={max_weight}",
                    g.encode_graph6()
                );
                match solution {
                    Some(s) => {
                        check_solution_becomes_witness(&g, &star, &identity, k, &s);
                        feasible += 1;
                    }
                    None => infeasible += 1,
                }
            }
        }
    }
    assert!(feasible > 0 && infeasible > 0, "both verdicts must occur");
}

#[test]
fn path_on_three_nodes_needs_weight_two_at_one_interval() {
    let mut p3 = Graph::new(3).unwrap();
    p3.add_edge(0, 1).unwrap();
    p3.add_edge(1, 2).unwrap();
    let star = enumerate_topologies(3).unwrap().remove(0);
    let identity = LeafAssignment::identity(3);

    let tight = lp_solution(&p3, &star, Some(&identity), &IlpOptions::new(1, 1), 1_000_000);
    assert!(tight.is_none(), "unit weights cannot separate P3 at k=1");

    let relaxed = lp_solution(&p3, &star, Some(&identity), &IlpOptions::new(1, 2), 2_000_000);
    let solution = relaxed.expect("weight 2 suffices");
    check_solution_becomes_witness(&p3, &star, &identity, 1, &solution);
}

#[test]
fn free_assignment_models_solve_for_two_nodes() {
    let topo = pcglab_core::caterpillar_topology(2).unwrap();
    for edges in [0usize, 1] {
        let mut g = Graph::new(2).unwrap();
        if edges == 1 {
            g.add_edge(0, 1).unwrap();
        }
        let solution = lp_solution(&g, &topo, None, &IlpOptions::new(1, 2), 1_000_000)
            .expect("two-node graphs are always feasible");
        // the chosen bijection must be decodable and usable
        let asg = decode_assignment(&solution, 2);
        check_solution_becomes_witness(&g, &topo, &asg, 1, &solution);
    }
}

/// Read the x binaries back into an assignment.
fn decode_assignment(solution: &BTreeMap<String, i64>, n: usize) -> LeafAssignment {
    let mut slots = vec![usize::MAX; n];
    for node in 0..n {
        for slot in 0..n {
            if solution[&format!("x_{node}_{slot}")] == 1 {
                slots[node] = slot;
            }
        }
    }
    LeafAssignment::new(slots).expect("solution x variables form a bijection")
}

#[test]
fn free_assignment_space_guard_refuses_large_models() {
    let star = enumerate_topologies(3).unwrap().remove(0);
    let g = Graph::complete(3).unwrap();
    let text = export_ilp(&g, &star, None, &IlpOptions::new(1, 1)).unwrap();
    let model = parse_lp(&text).unwrap();
    let err = brute_force_solve(&model, 1_000_000).unwrap_err();
    assert!(err.contains("exceeds"), "got: {err}");
}

#[test]
fn exported_models_parse_cleanly_across_configurations() {
    for n in [3usize, 4] {
        let topos = enumerate_topologies(n).unwrap();
        for g in nonisomorphic_graphs(n) {
            for topo in &topos {
                for k in [1, 2] {
                    for asg in [Some(LeafAssignment::identity(n)), None] {
                        let text =
                            export_ilp(&g, topo, asg.as_ref(), &IlpOptions::new(k, 3)).unwrap();
                        let model = parse_lp(&text).unwrap_or_else(|e| {
                            panic!("n={n} k={k} free={}: {e}", asg.is_none())
                        });
                        assert!(!model.rows.is_empty());
                        // every referenced variable is declared with a box
                        for (_, lo, hi) in model.variables() {
                            assert!(lo <= hi);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn conflicted_distances_are_infeasible_at_any_interval_count() {
    // unit weights on the star collapse every pairwise distance to 2, so a
    // graph with both an edge and a non-edge admits no separation at all
    let mut p3 = Graph::new(3).unwrap();
    p3.add_edge(0, 1).unwrap();
    p3.add_edge(1, 2).unwrap();
    let star = enumerate_topologies(3).unwrap().remove(0);
    let identity = LeafAssignment::identity(3);
    for k in [1, 2] {
        let got = lp_solution(&p3, &star, Some(&identity), &IlpOptions::new(k, 1), 1_000_000);
        assert!(got.is_none(), "k = {k}");
        assert!(!reference_feasible(&p3, &star, &identity, k, 1, 1));
    }
}

//! Cross-validation of exported models against an independent MILP solver.
//!
//! Spot instances only: for each (graph, k, weight bound) the built-in
//! search verdict must agree with scipy's verdict on the exported model.
//! The graphs have 4 or 5 nodes, where exactly one tree shape exists, so
//! the free-assignment model covers the same space as the search. Skips
//! cleanly when python3 or scipy is not installed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use pcglab_core::{
    Graph, IlpOptions, SearchConfig, Witness, WeightedTree, caterpillar_topology, export_ilp,
    extract_intervals, search_witness, verify_witness,
};
use tempfile::TempDir;

fn scipy_available() -> bool {
    Command::new("python3")
        .args(["-c", "import scipy.optimize"])
        .output()
        .map(|out| out.status.success())
        .unwrap_or(false)
}

fn checker_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../tools/check_lp.py")
}

/// Rebuild a witness from the solver's integer point and verify it.
fn witness_from_solution(
    g: &Graph,
    topo: &pcglab_core::Topology,
    solution: &serde_json::Value,
    k: usize,
) {
    let shape = topo.tree();
    let labels: Vec<Option<String>> = (0..shape.node_count())
        .map(|v| shape.label(v).map(String::from))
        .collect();
    let edges: Vec<(usize, usize, u64)> = shape
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v, _))| {
            let w = solution[format!("w_{i}")]
                .as_i64()
                .unwrap_or_else(|| panic!("solution lacks w_{i}"));
            (u, v, u64::try_from(w).expect("weights are non-negative"))
        })
        .collect();
    let tree = WeightedTree::new(labels, edges).expect("shape edges stay a tree");

    let n = g.node_count();
    let mut assignment: BTreeMap<usize, String> = BTreeMap::new();
    for node in 0..n {
        let slot = (0..n)
            .find(|s| solution[format!("x_{node}_{s}")].as_i64() == Some(1))
            .unwrap_or_else(|| panic!("no slot chosen for node {node}"));
        let label = shape
            .label(topo.leaf_node(slot))
            .expect("slots map to labeled leaves");
        assignment.insert(node, label.to_string());
    }

    let intervals = extract_intervals(g, &tree, &assignment, k)
        .expect("assignment is a bijection onto the leaves")
        .expect("the solver's point must yield at most k intervals");
    let witness = Witness {
        tree,
        assignment,
        intervals,
    };
    let report = verify_witness(g, &witness).expect("witness is well-formed");
    assert!(
        report.pass,
        "witness rebuilt from the solver's point fails verification"
    );
}

#[test]
fn scipy_verdicts_match_search() {
    if !scipy_available() {
        println!("external solver check: SKIP — python3 with scipy not available");
        return;
    }
    let dir = TempDir::new().unwrap();

    let instances: Vec<(&str, Graph, usize, u64)> = vec![
        ("c4 one interval", Graph::cycle(4).unwrap(), 1, 3),
        ("edgeless", Graph::new(4).unwrap(), 1, 2),
        ("c5 unit weights", Graph::cycle(5).unwrap(), 1, 1),
        ("c5 unit weights two intervals", Graph::cycle(5).unwrap(), 2, 1),
        ("c5 two intervals", Graph::cycle(5).unwrap(), 2, 3),
    ];

    let mut feasible_seen = false;
    let mut infeasible_seen = false;
    for (name, g, k, max_weight) in instances {
        let mut cfg = SearchConfig::new(k, max_weight);
        cfg.min_weight = 1;
        let search_feasible = search_witness(&g, &cfg)
            .unwrap_or_else(|e| panic!("{name}: search failed: {e}"))
            .witness
            .is_some();

        let topo = caterpillar_topology(g.node_count()).unwrap();
        let mut opts = IlpOptions::new(k, max_weight);
        opts.min_weight = 1;
        let model = export_ilp(&g, &topo, None, &opts).unwrap();
        let model_path = dir.path().join(format!("{}.lp", name.replace(' ', "_")));
        std::fs::write(&model_path, model).unwrap();

        let out = Command::new("python3")
            .arg(checker_path())
            .arg(&model_path)
            .output()
            .expect("spawn python3");
        let stdout = String::from_utf8_lossy(&out.stdout);
        let stderr = String::from_utf8_lossy(&out.stderr);
        let solver_feasible = match out.status.code() {
            Some(0) => true,
            Some(1) => false,
            code => panic!("{name}: checker failed (exit {code:?}): {stderr}"),
        };

        assert_eq!(
            search_feasible, solver_feasible,
            "{name}: search says {search_feasible}, scipy says {solver_feasible}"
        );
        feasible_seen |= solver_feasible;
        infeasible_seen |= !solver_feasible;

        if solver_feasible {
            let body: serde_json::Value =
                serde_json::from_str(stdout.trim()).expect("checker emits JSON");
            witness_from_solution(&g, &topo, &body["solution"], k);
        }
    }
    assert!(
        feasible_seen && infeasible_seen,
        "instance list no longer exercises both verdicts"
    );
}

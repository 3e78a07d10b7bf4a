//! Witnesses and their semantics: disjoint integer interval sets, the
//! verifier, and tightest-interval extraction for a fixed tree and
//! assignment.
//!
//! A witness realizes a graph when, for every node pair, adjacency holds
//! exactly if the tree distance between the assigned leaves falls inside the
//! interval union. Once the tree, weights and assignment are fixed, the
//! minimal number of intervals needed is determined by a run decomposition
//! of the realized distances: sort the distinct distance values, mark each
//! as edge-realized or non-edge-realized (a value marked both ways is an
//! immediate contradiction), and count the maximal blocks of edge values not
//! interrupted by a non-edge value. Each block is coverable by one tight
//! interval `[min, max]`, and no interval may span two blocks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::newick::{parse_newick, to_newick};
use crate::tree::WeightedTree;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum WitnessError {
    #[error("interval [{a},{b}] has its endpoints out of order")]
    BadInterval { a: u64, b: u64 },
    #[error("intervals [{a1},{b1}] and [{a2},{b2}] are not disjoint with an integer gap")]
    Overlap { a1: u64, b1: u64, a2: u64, b2: u64 },
    #[error("interval budget must be at least 1")]
    ZeroIntervalBudget,
    #[error("graph has {nodes} nodes but tree has {leaves} leaves")]
    LeafCountMismatch { nodes: usize, leaves: usize },
    #[error("assignment has no entry for node {0}")]
    MissingNode(usize),
    #[error("assignment mentions node {node} but the graph has only {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("assignment target {0:?} is not a leaf label of the tree")]
    UnknownLeaf(String),
    #[error("assignment maps two nodes to leaf {0:?}")]
    NotInjective(String),
    #[error("witness json: {0}")]
    Json(String),
    #[error("witness json: {0}")]
    Newick(String),
}

/// Pairwise-disjoint closed integer intervals, sorted ascending with strict
/// integer gaps (`b_i < a_{i+1}`). May be empty, which is the natural
/// certificate for graphs with no edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSet {
    ivals: Vec<(u64, u64)>,
}

impl IntervalSet {
    /// Validate and canonicalize (sort by lower endpoint).
    pub fn new(mut ivals: Vec<(u64, u64)>) -> Result<Self, WitnessError> {
        for &(a, b) in &ivals {
            if a > b {
                return Err(WitnessError::BadInterval { a, b });
            }
        }
        ivals.sort_unstable();
        for pair in ivals.windows(2) {
            let (a1, b1) = pair[0];
            let (a2, b2) = pair[1];
            if b1 >= a2 {
                return Err(WitnessError::Overlap { a1, b1, a2, b2 });
            }
        }
        Ok(IntervalSet { ivals })
    }

    pub fn empty() -> Self {
        IntervalSet { ivals: Vec::new() }
    }

    pub fn contains(&self, x: u64) -> bool {
        self.ivals.iter().any(|&(a, b)| a <= x && x <= b)
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.ivals
    }

    pub fn len(&self) -> usize {
        self.ivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ivals.is_empty()
    }
}

/// A k-interval PCG certificate: tree, node→leaf assignment, intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub tree: WeightedTree,
    pub assignment: BTreeMap<usize, String>,
    pub intervals: IntervalSet,
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    tree: String,
    assignment: BTreeMap<String, String>,
    intervals: Vec<[u64; 2]>,
}

impl Witness {
    pub fn to_json_value(&self) -> serde_json::Value {
        let file = WitnessJson {
            tree: to_newick(&self.tree),
            assignment: self
                .assignment
                .iter()
                .map(|(&node, leaf)| (node.to_string(), leaf.clone()))
                .collect(),
            intervals: self.intervals.intervals().iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_value(file).expect("witness serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, WitnessError> {
        let file: WitnessJson =
            serde_json::from_str(text).map_err(|e| WitnessError::Json(e.to_string()))?;
        let tree = parse_newick(&file.tree).map_err(|e| WitnessError::Newick(e.to_string()))?;
        let mut assignment = BTreeMap::new();
        for (key, leaf) in file.assignment {
            let node: usize = key
                .parse()
                .map_err(|_| WitnessError::Json(format!("node key {key:?} is not an integer")))?;
            assignment.insert(node, leaf);
        }
        let intervals =
            IntervalSet::new(file.intervals.into_iter().map(|[a, b]| (a, b)).collect())?;
        Ok(Witness {
            tree,
            assignment,
            intervals,
        })
    }
}

/// One node pair whose adjacency disagrees with interval membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub distance: u64,
    /// Whether the pair is adjacent in the graph (and therefore should have
    /// had its distance inside the intervals, or vice versa).
    pub adjacent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Check the assignment is a bijection from graph nodes onto tree leaves;
/// returns the leaf label per node, indexed by node id.
fn check_assignment(
    g: &Graph,
    tree: &WeightedTree,
    assignment: &BTreeMap<usize, String>,
) -> Result<Vec<String>, WitnessError> {
    let n = g.node_count();
    let leaves = tree.leaf_count();
    if leaves != n {
        return Err(WitnessError::LeafCountMismatch { nodes: n, leaves });
    }
    if let Some((&node, _)) = assignment.iter().find(|&(&node, _)| node >= n) {
        return Err(WitnessError::NodeOutOfRange { node, n });
    }
    let mut used = BTreeSet::new();
    let mut labels = Vec::with_capacity(n);
    for node in 0..n {
        let leaf = assignment
            .get(&node)
            .ok_or(WitnessError::MissingNode(node))?;
        if tree.leaf_by_label(leaf).is_none() {
            return Err(WitnessError::UnknownLeaf(leaf.clone()));
        }
        if !used.insert(leaf.clone()) {
            return Err(WitnessError::NotInjective(leaf.clone()));
        }
        labels.push(leaf.clone());
    }
    Ok(labels)
}

/// Decide whether the witness realizes the graph; on failure the report
/// lists every offending pair with its distance.
pub fn verify_witness(g: &Graph, w: &Witness) -> Result<VerifyReport, WitnessError> {
    let labels = check_assignment(g, &w.tree, &w.assignment)?;
    let dm = w.tree.leaf_distance_matrix();
    let mut violations = Vec::new();
    for (u, v) in g.pairs() {
        let d = dm
            .by_label(&labels[u], &labels[v])
            .expect("assignment targets are leaves");
        let adjacent = g.has_edge(u, v);
        if adjacent != w.intervals.contains(d) {
            violations.push(Violation {
                u,
                v,
                distance: d,
                adjacent,
            });
        }
    }
    Ok(VerifyReport {
        pass: violations.is_empty(),
        violations,
    })
}

/// Run decomposition over a map `distance → (edge count, non-edge count)`.
/// `None` when some distance is realized by both an edge and a non-edge;
/// otherwise the tight `[min, max]` interval of each maximal uninterrupted
/// block of edge distances, in ascending order.
pub(crate) fn minimal_runs(values: &BTreeMap<u64, (u32, u32)>) -> Option<Vec<(u64, u64)>> {
    let mut runs: Vec<(u64, u64)> = Vec::new();
    let mut separated = true;
    for (&v, &(edges, nonedges)) in values {
        if edges > 0 && nonedges > 0 {
            return None;
        }
        if edges > 0 {
            if separated {
                runs.push((v, v));
                separated = false;
            } else {
                runs.last_mut().expect("run open").1 = v;
            }
        } else if nonedges > 0 {
            separated = true;
        }
    }
    Some(runs)
}

/// The tightest interval set (fewest, narrowest intervals) realizing `g` on
/// this tree and assignment, or `None` when no family of at most `k`
/// disjoint intervals works. The minimal interval count itself does not
/// depend on `k`; only the feasibility cutoff does.
pub fn extract_intervals(
    g: &Graph,
    tree: &WeightedTree,
    assignment: &BTreeMap<usize, String>,
    k: usize,
) -> Result<Option<IntervalSet>, WitnessError> {
    if k == 0 {
        return Err(WitnessError::ZeroIntervalBudget);
    }
    let labels = check_assignment(g, tree, assignment)?;
    let dm = tree.leaf_distance_matrix();
    let mut values: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    for (u, v) in g.pairs() {
        let d = dm
            .by_label(&labels[u], &labels[v])
            .expect("assignment targets are leaves");
        let entry = values.entry(d).or_insert((0, 0));
        if g.has_edge(u, v) {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }
    match minimal_runs(&values) {
        Some(runs) if runs.len() <= k => Ok(Some(
            IntervalSet::new(runs).expect("runs are sorted and separated"),
        )),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star3(weights: [u64; 3]) -> WeightedTree {
        WeightedTree::new(
            vec![Some("a".into()), Some("b".into()), Some("c".into()), None],
            vec![(0, 3, weights[0]), (1, 3, weights[1]), (2, 3, weights[2])],
        )
        .unwrap()
    }

    fn assign(labels: &[&str]) -> BTreeMap<usize, String> {
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| (i, l.to_string()))
            .collect()
    }

    #[test]
    fn interval_set_validation() {
        let s = IntervalSet::new(vec![(3, 5), (0, 1)]).unwrap();
        assert_eq!(s.intervals(), &[(0, 1), (3, 5)]);
        assert!(s.contains(0) && s.contains(4) && s.contains(5));
        assert!(!s.contains(2) && !s.contains(6));

        assert!(matches!(
            IntervalSet::new(vec![(5, 3)]),
            Err(WitnessError::BadInterval { .. })
        ));
        // adjacent integers are enough of a gap; touching is not
        assert!(IntervalSet::new(vec![(1, 2), (3, 4)]).is_ok());
        assert!(matches!(
            IntervalSet::new(vec![(1, 3), (3, 4)]),
            Err(WitnessError::Overlap { .. })
        ));
    }

    #[test]
    fn verify_two_node_examples() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let tree = WeightedTree::new(
            vec![Some("x".into()), Some("y".into())],
            vec![(0, 1, 5)],
        )
        .unwrap();
        let pass = Witness {
            tree: tree.clone(),
            assignment: assign(&["x", "y"]),
            intervals: IntervalSet::new(vec![(5, 5)]).unwrap(),
        };
        assert!(verify_witness(&k2, &pass).unwrap().pass);

        let fail = Witness {
            tree,
            assignment: assign(&["x", "y"]),
            intervals: IntervalSet::new(vec![(6, 9)]).unwrap(),
        };
        let report = verify_witness(&k2, &fail).unwrap();
        assert!(!report.pass);
        assert_eq!(
            report.violations,
            vec![Violation {
                u: 0,
                v: 1,
                distance: 5,
                adjacent: true
            }]
        );
    }

    #[test]
    fn verify_structural_errors() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let tree3 = star3([1, 1, 1]);
        let w = Witness {
            tree: tree3,
            assignment: assign(&["a", "b"]),
            intervals: IntervalSet::empty(),
        };
        assert!(matches!(
            verify_witness(&k2, &w),
            Err(WitnessError::LeafCountMismatch { .. })
        ));

        let tree2 = WeightedTree::new(
            vec![Some("x".into()), Some("y".into())],
            vec![(0, 1, 5)],
        )
        .unwrap();
        let unknown = Witness {
            tree: tree2.clone(),
            assignment: assign(&["x", "z"]),
            intervals: IntervalSet::empty(),
        };
        assert!(matches!(
            verify_witness(&k2, &unknown),
            Err(WitnessError::UnknownLeaf(_))
        ));

        let doubled = Witness {
            tree: tree2.clone(),
            assignment: assign(&["x", "x"]),
            intervals: IntervalSet::empty(),
        };
        assert!(matches!(
            verify_witness(&k2, &doubled),
            Err(WitnessError::NotInjective(_))
        ));

        let missing = Witness {
            tree: tree2,
            assignment: [(0usize, "x".to_string())].into_iter().collect(),
            intervals: IntervalSet::empty(),
        };
        assert!(matches!(
            verify_witness(&k2, &missing),
            Err(WitnessError::MissingNode(1))
        ));
    }

    #[test]
    fn run_decomposition_cases() {
        let map = |entries: &[(u64, u32, u32)]| -> BTreeMap<u64, (u32, u32)> {
            entries.iter().map(|&(v, e, n)| (v, (e, n))).collect()
        };
        // edges at 4,5; non-edge at 7 → one run [4,5]
        assert_eq!(
            minimal_runs(&map(&[(4, 1, 0), (5, 2, 0), (7, 0, 1)])),
            Some(vec![(4, 5)])
        );
        // non-edge value between edge values splits the run
        assert_eq!(
            minimal_runs(&map(&[(3, 1, 0), (5, 0, 1), (9, 1, 0)])),
            Some(vec![(3, 3), (9, 9)])
        );
        // shared value is an immediate contradiction
        assert_eq!(minimal_runs(&map(&[(6, 1, 1), (8, 0, 1)])), None);
        // non-edge values outside the edge range are harmless
        assert_eq!(
            minimal_runs(&map(&[(1, 0, 1), (4, 1, 0), (6, 2, 0), (9, 0, 2)])),
            Some(vec![(4, 6)])
        );
        // no edges at all → zero intervals
        assert_eq!(minimal_runs(&map(&[(3, 0, 1)])), Some(vec![]));
    }

    #[test]
    fn extract_one_and_two_interval_cases() {
        // distances: ab = 4 (edge), ac = 5 (edge), bc = 7 (non-edge)
        let g = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let tree = star3([1, 3, 4]);
        let a = assign(&["a", "b", "c"]);
        let got = extract_intervals(&g, &tree, &a, 1).unwrap().unwrap();
        assert_eq!(got.intervals(), &[(4, 5)]);

        // distances: ab = 4 (edge), ac = 10 (edge), bc = 6 (non-edge)
        let tree = star3([4, 0, 6]);
        assert_eq!(extract_intervals(&g, &tree, &a, 1).unwrap(), None);
        let got = extract_intervals(&g, &tree, &a, 2).unwrap().unwrap();
        assert_eq!(got.intervals(), &[(4, 4), (10, 10)]);

        // conflict: ab = 6 (edge), ac = 6 (non-edge) → infeasible at any k
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let tree = star3([2, 4, 4]);
        for k in 1..=4 {
            assert_eq!(extract_intervals(&g, &tree, &a, k).unwrap(), None);
        }
        assert!(matches!(
            extract_intervals(&g, &tree, &a, 0),
            Err(WitnessError::ZeroIntervalBudget)
        ));
    }

    #[test]
    fn extraction_round_trips_through_the_verifier() {
        let g = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let tree = star3([1, 3, 4]);
        let a = assign(&["a", "b", "c"]);
        let intervals = extract_intervals(&g, &tree, &a, 1).unwrap().unwrap();
        let w = Witness {
            tree,
            assignment: a,
            intervals,
        };
        assert!(verify_witness(&g, &w).unwrap().pass);
    }

    #[test]
    fn edgeless_graphs_need_no_intervals() {
        let g = Graph::new(3).unwrap();
        let tree = star3([1, 1, 1]);
        let a = assign(&["a", "b", "c"]);
        let got = extract_intervals(&g, &tree, &a, 1).unwrap().unwrap();
        assert!(got.is_empty());
        let w = Witness {
            tree,
            assignment: a,
            intervals: got,
        };
        assert!(verify_witness(&g, &w).unwrap().pass);
    }

    #[test]
    fn witness_json_round_trip() {
        let w = Witness {
            tree: star3([1, 3, 4]),
            assignment: assign(&["a", "b", "c"]),
            intervals: IntervalSet::new(vec![(4, 5)]).unwrap(),
        };
        let text = w.to_json();
        let back = Witness::from_json(&text).unwrap();
        assert_eq!(back.intervals, w.intervals);
        assert_eq!(back.assignment, w.assignment);
        assert!(back.tree.structurally_equal(&w.tree));

        assert!(Witness::from_json("{").is_err());
        assert!(matches!(
            Witness::from_json(r#"{"tree":"(a:1,b:1);","assignment":{"x":"a","1":"b"},"intervals":[]}"#),
            Err(WitnessError::Json(_))
        ));
        assert!(matches!(
            Witness::from_json(r#"{"tree":"(a:1,b:","assignment":{},"intervals":[]}"#),
            Err(WitnessError::Newick(_))
        ));
        assert!(matches!(
            Witness::from_json(r#"{"tree":"(a:1,b:1);","assignment":{"0":"a","1":"b"},"intervals":[[2,1]]}"#),
            Err(WitnessError::BadInterval { .. })
        ));
    }
}

//! Direct two-interval constructions for graphs with a universal or
//! almost-universal node.
//!
//! Both constructions take a verified single-interval witness for the graph
//! with the special node `u` removed and lift it to a two-interval witness
//! of the whole graph, with no further search:
//!
//! * if `u` is adjacent to everything else, the base tree gains a leaf at
//!   an internal node with weight `p + 1` (where `p` is the largest leaf
//!   distance of the base tree). Every distance from the new leaf then
//!   lands in `[p + 1, 2p + 1]`, strictly above every base distance, and
//!   that whole band becomes the second interval;
//! * if `u` is adjacent to everything except a single node `v`, the base
//!   tree is first stretched (every edge gains 2 per leaf endpoint, adding
//!   exactly 4 to each leaf distance), then `v`'s leaf edge is split one
//!   unit from `v`, and the new leaf for `u` is attached at the split point
//!   with weight `p`. Distances from `u` now span `[p + 1, 2p]` with `v`
//!   alone at exactly `p + 1` — so the second interval `[p + 2, 2p]` keeps
//!   every neighbor and excludes `v`. Stretching first is what opens that
//!   one-value gap.
//!
//! The arithmetic claims above are also asserted at run time on the actual
//! trees rather than trusted, and every produced witness is re-verified
//! against the input graph before it is returned.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::solver::{SearchConfig, SolverError, TopologyChoice, search_escalating};
use crate::tree::{TreeError, WeightedTree};
use crate::witness::{IntervalSet, Witness, WitnessError, verify_witness};

#[derive(Error, Debug)]
pub enum ConstructError {
    #[error("graph has {0} nodes; the construction needs at least 2")]
    GraphTooSmall(usize),
    #[error("node {0} is not adjacent to every other node")]
    NotUniversal(usize),
    #[error("node {u} is not adjacent to exactly the nodes other than {v}")]
    NotAlmostUniversal { u: usize, v: usize },
    #[error("graph has neither a universal nor an almost-universal node")]
    NoCandidate,
    #[error("base witness fails verification against the reduced graph ({violations} violating pairs)")]
    BaseWitnessRejected { violations: usize },
    #[error("base witness must carry exactly one interval, found {0}; normalize it first")]
    BaseNotSingleInterval(usize),
    #[error("base witness needs at least 2 leaves")]
    BaseTooSmall,
    #[error("base interval ends at {b} but the largest base leaf distance is {p}; normalize it first")]
    BaseNotNormalized { b: u64, p: u64 },
    #[error("base tree has no internal node to attach at; split an edge first")]
    NoAttachPoint,
    #[error("every integer in [0, {p}] is realized as a leaf distance; no empty interval exists for an edgeless base")]
    NoUnrealizedValue { p: u64 },
    #[error("no single-interval base witness found (weight cap {max_weight}, budget exhausted: {budget_hit})")]
    BaseSearchFailed { max_weight: u64, budget_hit: bool },
    #[error("internal error: {0}")]
    InternalCheck(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Which special node the construction pivots on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `u` is adjacent to every other node.
    Universal { u: usize },
    /// `u` is adjacent to every node except `v`.
    AlmostUniversal { u: usize, v: usize },
}

/// Everything the construction did, step by step, alongside its result.
#[derive(Clone, Debug)]
pub struct ConstructionTrace {
    pub route: Route,
    /// The normalized base witness the lift started from; `None` only for
    /// 2-node graphs, which get their witness directly.
    pub base: Option<Witness>,
    /// Intermediate trees in order, each tagged with the step that made it.
    pub stages: Vec<(&'static str, WeightedTree)>,
    /// Largest leaf distance of the tree the new leaf was attached to.
    pub p: u64,
    /// Weight of the split leaf edge (almost-universal route only).
    pub c: Option<u64>,
    /// Node the new leaf was attached at (`None` for 2-node graphs).
    pub attach_node: Option<usize>,
    pub witness: Witness,
}

/// Smallest `L{i}` label not already used by a leaf of `tree`.
fn fresh_leaf_label(tree: &WeightedTree) -> String {
    (0..)
        .map(|i| format!("L{i}"))
        .find(|l| tree.leaf_by_label(l).is_none())
        .expect("label space is unbounded")
}

/// Check `base` against `g_base` and return its single interval and largest
/// leaf distance.
fn base_preconditions(
    g_base: &Graph,
    base: &Witness,
) -> Result<((u64, u64), u64), ConstructError> {
    let report = verify_witness(g_base, base)?;
    if !report.pass {
        return Err(ConstructError::BaseWitnessRejected {
            violations: report.violations.len(),
        });
    }
    let ivals = base.intervals.intervals();
    if ivals.len() != 1 {
        return Err(ConstructError::BaseNotSingleInterval(ivals.len()));
    }
    let p = base
        .tree
        .max_leaf_distance()
        .ok_or(ConstructError::BaseTooSmall)?;
    Ok((ivals[0], p))
}

/// Smallest integer in `[0, p]` that is not a leaf distance of `tree`.
fn smallest_unrealized(tree: &WeightedTree, p: u64) -> Result<u64, ConstructError> {
    let dm = tree.leaf_distance_matrix();
    let realized: std::collections::BTreeSet<u64> = dm.iter_pairs().map(|(_, _, d)| d).collect();
    (0..=p)
        .find(|m| !realized.contains(m))
        .ok_or(ConstructError::NoUnrealizedValue { p })
}

/// Rewrite a verified base witness into the exact shape the lifts expect:
/// a single interval that ends at or below the largest leaf distance `p`.
///
/// With at least one edge this just clamps the interval's upper end to `p`
/// (no edge distance can exceed `p`, so nothing is lost). An edgeless base
/// instead gets the canonical empty interval `[m, m]` where `m` is the
/// smallest value in `[0, p]` realized by no leaf pair.
pub fn normalize_base_witness(g_base: &Graph, base: &Witness) -> Result<Witness, ConstructError> {
    let report = verify_witness(g_base, base)?;
    if !report.pass {
        return Err(ConstructError::BaseWitnessRejected {
            violations: report.violations.len(),
        });
    }
    let p = base
        .tree
        .max_leaf_distance()
        .ok_or(ConstructError::BaseTooSmall)?;
    let intervals = if g_base.edge_count() > 0 {
        let ivals = base.intervals.intervals();
        if ivals.len() != 1 {
            return Err(ConstructError::BaseNotSingleInterval(ivals.len()));
        }
        let (a, b) = ivals[0];
        IntervalSet::new(vec![(a, b.min(p))])?
    } else {
        let m = smallest_unrealized(&base.tree, p)?;
        IntervalSet::new(vec![(m, m)])?
    };
    let normalized = Witness {
        tree: base.tree.clone(),
        assignment: base.assignment.clone(),
        intervals,
    };
    if !verify_witness(g_base, &normalized)?.pass {
        return Err(ConstructError::InternalCheck(
            "normalized base witness no longer verifies".into(),
        ));
    }
    Ok(normalized)
}

/// Lift the assignment of a base witness on `g.remove_node(u)` back to `g`,
/// sending `u` itself to `u_label`.
fn lift_assignment(
    g: &Graph,
    u: usize,
    base: &Witness,
    u_label: &str,
) -> Result<BTreeMap<usize, String>, ConstructError> {
    let mut assignment = BTreeMap::new();
    for node in 0..g.node_count() {
        let label = if node == u {
            u_label.to_string()
        } else {
            let base_node = if node < u { node } else { node - 1 };
            base.assignment
                .get(&base_node)
                .ok_or_else(|| {
                    ConstructError::InternalCheck(format!(
                        "base assignment misses node {base_node}"
                    ))
                })?
                .clone()
        };
        assignment.insert(node, label);
    }
    Ok(assignment)
}

/// Two-interval witness for a graph with a universal node `u`, given a
/// normalized single-interval base witness for `g` without `u`.
pub fn universal_extension(
    g: &Graph,
    u: usize,
    base: &Witness,
) -> Result<ConstructionTrace, ConstructError> {
    if !g.universal_nodes().contains(&u) {
        return Err(ConstructError::NotUniversal(u));
    }
    if g.node_count() < 2 {
        return Err(ConstructError::GraphTooSmall(g.node_count()));
    }
    let g_base = g.remove_node(u)?;
    let ((a, b), p) = base_preconditions(&g_base, base)?;
    if b > p {
        return Err(ConstructError::BaseNotNormalized { b, p });
    }
    let attach = *base
        .tree
        .internal_nodes()
        .first()
        .ok_or(ConstructError::NoAttachPoint)?;
    let u_label = fresh_leaf_label(&base.tree);
    let (lifted, _u_leaf) = base.tree.with_leaf_attached(attach, &u_label, p + 1)?;
    let witness = Witness {
        assignment: lift_assignment(g, u, base, &u_label)?,
        intervals: IntervalSet::new(vec![(a, b), (p + 1, 2 * p + 1)])?,
        tree: lifted.clone(),
    };
    if !verify_witness(g, &witness)?.pass {
        return Err(ConstructError::InternalCheck(
            "universal lift failed verification".into(),
        ));
    }
    Ok(ConstructionTrace {
        route: Route::Universal { u },
        base: Some(base.clone()),
        stages: vec![("attach", lifted)],
        p,
        c: None,
        attach_node: Some(attach),
        witness,
    })
}

/// Two-interval witness for a graph with an almost-universal node `u` whose
/// single non-neighbor is `v`, given a normalized single-interval base
/// witness for `g` without `u`.
pub fn almost_universal_extension(
    g: &Graph,
    u: usize,
    v: usize,
    base: &Witness,
) -> Result<ConstructionTrace, ConstructError> {
    if !g.almost_universal_nodes().contains(&(u, v)) {
        return Err(ConstructError::NotAlmostUniversal { u, v });
    }
    let g_base = g.remove_node(u)?;
    let ((a, b), base_p) = base_preconditions(&g_base, base)?;
    if b > base_p {
        return Err(ConstructError::BaseNotNormalized { b, p: base_p });
    }

    // stretch: every leaf distance grows by exactly 4
    let stretched = base.tree.with_leaf_edges_augmented(2);

    // split v's leaf edge one unit away from v
    let v_base = if v < u { v } else { v - 1 };
    let v_label = base
        .assignment
        .get(&v_base)
        .ok_or_else(|| ConstructError::InternalCheck(format!("no leaf assigned to {v_base}")))?;
    let v_leaf = stretched
        .leaf_by_label(v_label)
        .ok_or_else(|| ConstructError::InternalCheck(format!("leaf {v_label} missing")))?;
    let &(v_neighbor, c) = stretched
        .neighbors(v_leaf)
        .first()
        .ok_or(ConstructError::BaseTooSmall)?;
    let (split, y) = stretched.with_edge_split(v_leaf, v_neighbor, 1)?;

    let p = split
        .max_leaf_distance()
        .ok_or(ConstructError::BaseTooSmall)?;
    debug_assert_eq!(p, base_p + 4);

    // the stretched base interval, clamped back under p; an edgeless base
    // instead gets a fresh empty interval
    let first = if g_base.edge_count() > 0 {
        (a + 4, (b + 4).min(p))
    } else {
        let m = smallest_unrealized(&split, p)?;
        (m, m)
    };

    let u_label = fresh_leaf_label(&split);
    let (lifted, u_leaf) = split.with_leaf_attached(y, &u_label, p)?;

    // the geometry this construction relies on, checked on the actual tree:
    // v sits exactly one past p, every other leaf inside [p + 2, 2p]
    let d_uv = lifted.distance_between_nodes(u_leaf, v_leaf);
    if d_uv != p + 1 {
        return Err(ConstructError::InternalCheck(format!(
            "distance from the new leaf to {v_label} is {d_uv}, expected {}",
            p + 1
        )));
    }
    for leaf in lifted.leaves() {
        if leaf == u_leaf || leaf == v_leaf {
            continue;
        }
        let d = lifted.distance_between_nodes(u_leaf, leaf);
        if !(p + 2..=2 * p).contains(&d) {
            return Err(ConstructError::InternalCheck(format!(
                "distance from the new leaf to leaf node {leaf} is {d}, outside [{}, {}]",
                p + 2,
                2 * p
            )));
        }
    }

    let witness = Witness {
        assignment: lift_assignment(g, u, base, &u_label)?,
        intervals: IntervalSet::new(vec![first, (p + 2, 2 * p)])?,
        tree: lifted.clone(),
    };
    if !verify_witness(g, &witness)?.pass {
        return Err(ConstructError::InternalCheck(
            "almost-universal lift failed verification".into(),
        ));
    }
    Ok(ConstructionTrace {
        route: Route::AlmostUniversal { u, v },
        base: Some(base.clone()),
        stages: vec![("stretch", stretched), ("split", split), ("attach", lifted)],
        p,
        c: Some(c),
        attach_node: Some(y),
        witness,
    })
}

/// Pick the route for `g`: the lowest universal node if any, otherwise the
/// lowest almost-universal pair.
fn pick_route(g: &Graph) -> Result<Route, ConstructError> {
    if let Some(&u) = g.universal_nodes().first() {
        return Ok(Route::Universal { u });
    }
    if let Some(&(u, v)) = g.almost_universal_nodes().first() {
        return Ok(Route::AlmostUniversal { u, v });
    }
    Err(ConstructError::NoCandidate)
}

fn validate_route(g: &Graph, route: Route) -> Result<(), ConstructError> {
    match route {
        Route::Universal { u } => {
            if !g.universal_nodes().contains(&u) {
                return Err(ConstructError::NotUniversal(u));
            }
        }
        Route::AlmostUniversal { u, v } => {
            if !g.almost_universal_nodes().contains(&(u, v)) {
                return Err(ConstructError::NotAlmostUniversal { u, v });
            }
        }
    }
    Ok(())
}

/// End-to-end construction: find (or accept) a base witness for `g` minus
/// the special node, normalize it, and lift it.
///
/// `route` picks the special node explicitly; `None` prefers the lowest
/// universal node, then the lowest almost-universal pair. `base` supplies a
/// caller-provided base witness; `None` searches for one with the weight
/// bound escalating up to `cfg.max_weight`. For the universal route a base
/// tree without internal nodes gets one by splitting its single edge.
/// 2-node graphs are handled directly (their reduced graph has a single
/// node and no distances, so neither lift applies).
pub fn construct_two_interval_witness(
    g: &Graph,
    route: Option<Route>,
    base: Option<&Witness>,
    cfg: &SearchConfig,
) -> Result<ConstructionTrace, ConstructError> {
    let n = g.node_count();
    if n < 2 {
        return Err(ConstructError::GraphTooSmall(n));
    }
    let route = match route {
        Some(r) => {
            validate_route(g, r)?;
            r
        }
        None => pick_route(g)?,
    };

    if n == 2 {
        let tree = WeightedTree::new(
            vec![Some("L0".into()), Some("L1".into())],
            vec![(0, 1, 1)],
        )?;
        let intervals = if g.edge_count() > 0 {
            IntervalSet::new(vec![(1, 1)])?
        } else {
            IntervalSet::empty()
        };
        let witness = Witness {
            tree,
            assignment: [(0, "L0".to_string()), (1, "L1".to_string())]
                .into_iter()
                .collect(),
            intervals,
        };
        if !verify_witness(g, &witness)?.pass {
            return Err(ConstructError::InternalCheck(
                "2-node witness failed verification".into(),
            ));
        }
        let p = witness.tree.max_leaf_distance().unwrap_or(0);
        return Ok(ConstructionTrace {
            route,
            base: None,
            stages: Vec::new(),
            p,
            c: None,
            attach_node: None,
            witness,
        });
    }

    let u = match route {
        Route::Universal { u } | Route::AlmostUniversal { u, .. } => u,
    };
    let g_base = g.remove_node(u)?;

    let mut found = match base {
        Some(w) => w.clone(),
        None => {
            let mut base_cfg = cfg.clone();
            base_cfg.k = 1;
            base_cfg.topologies = TopologyChoice::All;
            let (outcome, _) = search_escalating(&g_base, &base_cfg)?;
            outcome.witness.ok_or(ConstructError::BaseSearchFailed {
                max_weight: base_cfg.max_weight,
                budget_hit: outcome.stats.budget_hit,
            })?
        }
    };

    // the universal lift needs an internal attach point; a bare two-leaf
    // base gets one by splitting its edge (distances are unchanged)
    if matches!(route, Route::Universal { .. }) && found.tree.internal_nodes().is_empty() {
        let &(e0, e1, w) = found
            .tree
            .edges()
            .first()
            .ok_or(ConstructError::BaseTooSmall)?;
        let (tree, _mid) = found.tree.with_edge_split(e0, e1, w / 2)?;
        found = Witness { tree, ..found };
    }

    let normalized = normalize_base_witness(&g_base, &found)?;
    match route {
        Route::Universal { u } => universal_extension(g, u, &normalized),
        Route::AlmostUniversal { u, v } => almost_universal_extension(g, u, v, &normalized),
    }
}

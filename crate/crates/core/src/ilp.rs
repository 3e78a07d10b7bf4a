//! Export witness feasibility questions as integer linear programs in the
//! LP text format, for cross-checking the search with an external solver.
//!
//! A model fixes a graph, a tree shape and an interval budget `k` (1 or 2),
//! and asks for integer edge weights in `[min_weight, max_weight]` plus
//! interval endpoints such that every adjacent pair's leaf distance falls
//! inside an interval and every non-adjacent pair's falls outside all of
//! them. The model is feasible exactly when the bounded search with the
//! same shape and weight range finds a witness.
//!
//! With a fixed leaf assignment, distances are plain sums of weight
//! variables along leaf-to-leaf paths. Without one, the assignment itself
//! becomes part of the model: bijection binaries `x_{v s}` place node `v`
//! on slot `s`, pair binaries `z` select which slot pair carries each node
//! pair, and big-M rows tie an explicit distance variable to the selected
//! path sum. Membership in the union of intervals is linearized with one
//! selector binary per adjacent pair and three region binaries (below,
//! between, above) per non-adjacent pair.
//!
//! `M = |tree edges| × max_weight + 1` exceeds every realizable distance
//! and interval endpoint, which is all the big-M rows need.

use thiserror::Error;

use crate::graph::Graph;
use crate::topology::{LeafAssignment, Topology};
use crate::tree::WeightedTree;

#[derive(Error, Debug)]
pub enum IlpError {
    #[error("interval budget k = {0} is not supported by the linearization; only 1 and 2 are")]
    UnsupportedK(usize),
    #[error("weight range [{min}, {max}] is empty")]
    BadWeights { min: u64, max: u64 },
    #[error("topology has {got} leaf slots but the graph has {expected} nodes")]
    LeafMismatch { expected: usize, got: usize },
    #[error("assignment covers {got} nodes but the graph has {expected}")]
    AssignmentMismatch { expected: usize, got: usize },
    #[error("a single-node graph has no pairs; nothing to model")]
    TooSmall,
}

#[derive(Clone, Copy, Debug)]
pub struct IlpOptions {
    pub k: usize,
    pub min_weight: u64,
    pub max_weight: u64,
}

impl IlpOptions {
    pub fn new(k: usize, max_weight: u64) -> Self {
        IlpOptions {
            k,
            min_weight: 1,
            max_weight,
        }
    }
}

/// One linear row under construction: `terms op rhs`.
struct Lp {
    rows: Vec<String>,
    bounds: Vec<String>,
    generals: Vec<String>,
    binaries: Vec<String>,
}

impl Lp {
    fn row(&mut self, name: &str, terms: &[(i64, String)], op: &str, rhs: i64) {
        let mut body = String::new();
        for &(c, ref v) in terms {
            let sign = if c < 0 { '-' } else { '+' };
            if body.is_empty() && sign == '+' {
                // leading plus is dropped
            } else {
                body.push(sign);
                body.push(' ');
            }
            match c.abs() {
                1 => body.push_str(v),
                m => body.push_str(&format!("{m} {v}")),
            }
            body.push(' ');
        }
        self.rows.push(format!(" {name}: {body}{op} {rhs}"));
    }
}

/// Edge indices (into the shape tree's edge list) on the path between two
/// leaves.
fn path_edges(tree: &WeightedTree, from: usize, to: usize) -> Vec<usize> {
    let mut edge_idx = std::collections::BTreeMap::new();
    for (i, &(u, v, _)) in tree.edges().iter().enumerate() {
        edge_idx.insert((u.min(v), u.max(v)), i);
    }
    // DFS with explicit parent tracking, then backtrack
    let n = tree.node_count();
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![from];
    let mut seen = vec![false; n];
    seen[from] = true;
    while let Some(x) = stack.pop() {
        for &(y, _) in tree.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut edges = Vec::new();
    let mut x = to;
    while x != from {
        let p = parent[x];
        edges.push(edge_idx[&(x.min(p), x.max(p))]);
        x = p;
    }
    edges.reverse();
    edges
}

/// Emit the LP model. `assignment` fixes which node sits on which slot;
/// `None` leaves the assignment to the solver.
pub fn export_ilp(
    g: &Graph,
    topo: &Topology,
    assignment: Option<&LeafAssignment>,
    opts: &IlpOptions,
) -> Result<String, IlpError> {
    if !(1..=2).contains(&opts.k) {
        return Err(IlpError::UnsupportedK(opts.k));
    }
    if opts.min_weight > opts.max_weight {
        return Err(IlpError::BadWeights {
            min: opts.min_weight,
            max: opts.max_weight,
        });
    }
    let n = g.node_count();
    if n < 2 {
        return Err(IlpError::TooSmall);
    }
    if topo.leaf_count() != n {
        return Err(IlpError::LeafMismatch {
            expected: n,
            got: topo.leaf_count(),
        });
    }
    if let Some(a) = assignment {
        if a.len() != n {
            return Err(IlpError::AssignmentMismatch {
                expected: n,
                got: a.len(),
            });
        }
    }

    let tree = topo.tree();
    let e = tree.edge_count();
    let d_max = (e as i64) * (opts.max_weight as i64);
    let big_m = d_max + 1;
    let k = opts.k;

    let mut lp = Lp {
        rows: Vec::new(),
        bounds: Vec::new(),
        generals: Vec::new(),
        binaries: Vec::new(),
    };

    // weight variables
    for i in 0..e {
        lp.bounds
            .push(format!(" {} <= w_{i} <= {}", opts.min_weight, opts.max_weight));
        lp.generals.push(format!("w_{i}"));
    }
    // interval endpoint variables
    let endpoint_names: &[&str] = if k == 1 {
        &["a1", "b1"]
    } else {
        &["a1", "b1", "a2", "b2"]
    };
    for name in endpoint_names {
        lp.bounds.push(format!(" 0 <= {name} <= {d_max}"));
        lp.generals.push(name.to_string());
    }
    lp.row("ord1", &[(1, "b1".into()), (-1, "a1".into())], ">=", 0);
    if k == 2 {
        lp.row("ord2", &[(1, "b2".into()), (-1, "a2".into())], ">=", 0);
        lp.row("gap", &[(1, "a2".into()), (-1, "b1".into())], ">=", 1);
    }

    // per-pair distance terms: inline path sums when the assignment is
    // fixed, an explicit constrained variable when it is free
    let slot_paths: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|s| {
            (0..n)
                .map(|t| {
                    if s < t {
                        path_edges(tree, topo.leaf_node(s), topo.leaf_node(t))
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();
    let dist_terms = |i: usize, j: usize| -> Vec<(i64, String)> {
        match assignment {
            Some(a) => {
                let (s, t) = (a.slot_of(i).min(a.slot_of(j)), a.slot_of(i).max(a.slot_of(j)));
                slot_paths[s][t].iter().map(|&idx| (1, format!("w_{idx}"))).collect()
            }
            None => vec![(1, format!("d_{i}_{j}"))],
        }
    };

    if assignment.is_none() {
        // bijection binaries and their two sum systems
        for v in 0..n {
            for s in 0..n {
                lp.binaries.push(format!("x_{v}_{s}"));
            }
            let terms: Vec<_> = (0..n).map(|s| (1, format!("x_{v}_{s}"))).collect();
            lp.row(&format!("asg_node{v}"), &terms, "=", 1);
        }
        for s in 0..n {
            let terms: Vec<_> = (0..n).map(|v| (1, format!("x_{v}_{s}"))).collect();
            lp.row(&format!("asg_slot{s}"), &terms, "=", 1);
        }
        // per node pair: select the slot pair carrying it, and bind the
        // distance variable to that pair's path sum
        for (i, j) in g.pairs() {
            lp.bounds.push(format!(" 0 <= d_{i}_{j} <= {d_max}"));
            lp.generals.push(format!("d_{i}_{j}"));
            let mut sum = Vec::new();
            for s in 0..n {
                for t in s + 1..n {
                    let z = format!("z_{i}_{j}_{s}_{t}");
                    lp.binaries.push(z.clone());
                    sum.push((1, z.clone()));
                    lp.row(
                        &format!("link_{i}_{j}_{s}_{t}_a"),
                        &[(1, z.clone()), (-1, format!("x_{i}_{s}")), (-1, format!("x_{j}_{t}"))],
                        ">=",
                        -1,
                    );
                    lp.row(
                        &format!("link_{i}_{j}_{s}_{t}_b"),
                        &[(1, z.clone()), (-1, format!("x_{i}_{t}")), (-1, format!("x_{j}_{s}"))],
                        ">=",
                        -1,
                    );
                    // z = 1 forces d to equal this slot pair's path sum
                    let mut lo = vec![(1, format!("d_{i}_{j}"))];
                    let mut hi = vec![(-1, format!("d_{i}_{j}"))];
                    for &idx in &slot_paths[s][t] {
                        lo.push((-1, format!("w_{idx}")));
                        hi.push((1, format!("w_{idx}")));
                    }
                    lo.push((-big_m, z.clone()));
                    hi.push((-big_m, z.clone()));
                    lp.row(&format!("dist_{i}_{j}_{s}_{t}_lo"), &lo, ">=", -big_m);
                    lp.row(&format!("dist_{i}_{j}_{s}_{t}_hi"), &hi, ">=", -big_m);
                }
            }
            lp.row(&format!("zsum_{i}_{j}"), &sum, "=", 1);
        }
    }

    // membership rows
    for (i, j) in g.pairs() {
        let d = dist_terms(i, j);
        let adjacent = g.has_edge(i, j);
        let with = |extra: &[(i64, String)]| -> Vec<(i64, String)> {
            let mut t = d.clone();
            t.extend_from_slice(extra);
            t
        };
        match (k, adjacent) {
            (1, true) => {
                lp.row(&format!("p{i}_{j}_lo"), &with(&[(-1, "a1".into())]), ">=", 0);
                let mut t: Vec<_> = d.iter().map(|&(c, ref v)| (-c, v.clone())).collect();
                t.insert(0, (1, "b1".into()));
                lp.row(&format!("p{i}_{j}_hi"), &t, ">=", 0);
            }
            (1, false) => {
                // s = 0 puts the distance below the interval, s = 1 above
                let s = format!("s_{i}_{j}");
                lp.binaries.push(s.clone());
                lp.row(
                    &format!("p{i}_{j}_below"),
                    &with(&[(-1, "a1".into()), (-big_m, s.clone())]),
                    "<=",
                    -1,
                );
                let mut t: Vec<_> = d.iter().map(|&(c, ref v)| (-c, v.clone())).collect();
                t.insert(0, (1, "b1".into()));
                t.push((big_m, s.clone()));
                lp.row(&format!("p{i}_{j}_above"), &t, "<=", big_m - 1);
            }
            (2, true) => {
                // t = 1 places the distance in the first interval, t = 0 in
                // the second
                let sel = format!("t_{i}_{j}");
                lp.binaries.push(sel.clone());
                lp.row(
                    &format!("p{i}_{j}_lo1"),
                    &with(&[(-1, "a1".into()), (-big_m, sel.clone())]),
                    ">=",
                    -big_m,
                );
                let mut t: Vec<_> = d.iter().map(|&(c, ref v)| (-c, v.clone())).collect();
                t.insert(0, (1, "b1".into()));
                t.push((-big_m, sel.clone()));
                lp.row(&format!("p{i}_{j}_hi1"), &t, ">=", -big_m);
                lp.row(
                    &format!("p{i}_{j}_lo2"),
                    &with(&[(-1, "a2".into()), (big_m, sel.clone())]),
                    ">=",
                    0,
                );
                let mut t: Vec<_> = d.iter().map(|&(c, ref v)| (-c, v.clone())).collect();
                t.insert(0, (1, "b2".into()));
                t.push((big_m, sel.clone()));
                lp.row(&format!("p{i}_{j}_hi2"), &t, ">=", 0);
            }
            (2, false) => {
                // exactly one region: below the first interval, between the
                // two, or above the second
                let (r1, r2, r3) = (
                    format!("r1_{i}_{j}"),
                    format!("r2_{i}_{j}"),
                    format!("r3_{i}_{j}"),
                );
                for r in [&r1, &r2, &r3] {
                    lp.binaries.push(r.clone());
                }
                lp.row(
                    &format!("p{i}_{j}_sum"),
                    &[(1, r1.clone()), (1, r2.clone()), (1, r3.clone())],
                    "=",
                    1,
                );
                lp.row(
                    &format!("p{i}_{j}_r1"),
                    &with(&[(-1, "a1".into()), (big_m, r1.clone())]),
                    "<=",
                    big_m - 1,
                );
                let mut t: Vec<_> = d.iter().map(|&(c, ref v)| (-c, v.clone())).collect();
                t.insert(0, (1, "b1".into()));
                t.push((big_m, r2.clone()));
                lp.row(&format!("p{i}_{j}_r2a"), &t, "<=", big_m - 1);
                lp.row(
                    &format!("p{i}_{j}_r2b"),
                    &with(&[(-1, "a2".into()), (big_m, r2.clone())]),
                    "<=",
                    big_m - 1,
                );
                let mut t: Vec<_> = d.iter().map(|&(c, ref v)| (-c, v.clone())).collect();
                t.insert(0, (1, "b2".into()));
                t.push((big_m, r3.clone()));
                lp.row(&format!("p{i}_{j}_r3"), &t, "<=", big_m - 1);
            }
            _ => unreachable!("k was validated"),
        }
    }

    let mut out = String::new();
    out.push_str("\\ witness feasibility model\n");
    out.push_str(&format!("\\ graph: {}\n", g.encode_graph6()));
    out.push_str(&format!(
        "\\ shape: {}\n",
        crate::newick::to_newick(tree)
    ));
    out.push_str(&format!(
        "\\ intervals: {k}, weights: [{}, {}], assignment: {}, M = {big_m}\n",
        opts.min_weight,
        opts.max_weight,
        if assignment.is_some() { "fixed" } else { "free" },
    ));
    out.push_str("Minimize\n obj: w_0\nSubject To\n");
    for r in &lp.rows {
        out.push_str(r);
        out.push('\n');
    }
    out.push_str("Bounds\n");
    for b in &lp.bounds {
        out.push_str(b);
        out.push('\n');
    }
    out.push_str("General\n ");
    out.push_str(&lp.generals.join(" "));
    out.push('\n');
    if !lp.binaries.is_empty() {
        out.push_str("Binary\n ");
        out.push_str(&lp.binaries.join(" "));
        out.push('\n');
    }
    out.push_str("End\n");
    Ok(out)
}

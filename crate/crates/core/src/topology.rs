//! Unrooted full binary tree shapes, their leaf-slot automorphisms, and leaf
//! assignments modulo those automorphisms.
//!
//! Every witness search ranges over (shape, assignment, weights). Shapes are
//! restricted to trees whose internal nodes all have degree 3 — any witness
//! on a general tree can be rewritten onto such a shape without changing
//! leaf distances (see [`WeightedTree::binarize`]) — so nothing is lost.
//!
//! Leaves of a shape are *slots* numbered `0..n`, realized as tree leaves
//! labeled `L0..L{n-1}`. A `LeafAssignment` maps graph nodes to slots.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tree::{TreeError, WeightedTree};

#[derive(Error, Debug, PartialEq, Eq)]
pub enum TopologyError {
    #[error("leaf count {n} outside supported range [{min},{max}]")]
    LeafCountOutOfRange { n: usize, min: usize, max: usize },
    #[error("complete binary tree needs a power-of-two leaf count, got {0}")]
    NotPowerOfTwo(usize),
    #[error("tree is not full binary after suppressing degree-2 nodes")]
    NotFullBinary,
    #[error("assignment is not a bijection onto 0..{0}")]
    NotBijective(usize),
    #[error("topology: {0}")]
    Tree(#[from] TreeError),
}

/// A bijection from graph nodes to leaf slots: `slots[node] = slot`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeafAssignment {
    slots: Vec<usize>,
}

impl LeafAssignment {
    pub fn new(slots: Vec<usize>) -> Result<Self, TopologyError> {
        let n = slots.len();
        let mut seen = vec![false; n];
        for &s in &slots {
            if s >= n || seen[s] {
                return Err(TopologyError::NotBijective(n));
            }
            seen[s] = true;
        }
        Ok(LeafAssignment { slots })
    }

    pub fn identity(n: usize) -> Self {
        LeafAssignment {
            slots: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot_of(&self, node: usize) -> usize {
        self.slots[node]
    }

    /// The graph node assigned to `slot`.
    pub fn node_of(&self, slot: usize) -> usize {
        self.slots
            .iter()
            .position(|&s| s == slot)
            .expect("assignment is a bijection")
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.slots
    }
}

/// An unweighted full binary shape: a unit-weight tree with leaf slots and
/// the full group of slot permutations induced by tree symmetries.
#[derive(Clone, Debug)]
pub struct Topology {
    tree: WeightedTree,
    leaf_nodes: Vec<usize>,
    autos: Vec<Vec<usize>>,
}

impl Topology {
    /// Wrap a unit-weight tree whose leaves are labeled `L0..L{n-1}`.
    fn from_unit_tree(tree: WeightedTree) -> Result<Self, TopologyError> {
        let n = tree.leaf_count();
        if n < 2 {
            return Err(TopologyError::LeafCountOutOfRange { n, min: 2, max: 16 });
        }
        if !tree.is_full_binary_unrooted() {
            return Err(TopologyError::NotFullBinary);
        }
        let leaf_nodes: Vec<usize> = (0..n)
            .map(|i| {
                tree.leaf_by_label(&format!("L{i}"))
                    .expect("slots are labeled L0..L{n-1}")
            })
            .collect();
        let autos = slot_automorphisms(&tree, &leaf_nodes);
        Ok(Topology {
            tree,
            leaf_nodes,
            autos,
        })
    }

    /// Adopt the shape of an arbitrary tree: weights are discarded, degree-2
    /// internal nodes are suppressed, and leaves become slots in the order of
    /// their sorted original labels. Fails if the suppressed shape is not
    /// full binary.
    pub fn from_tree(t: &WeightedTree) -> Result<Self, TopologyError> {
        let mut edges: Vec<(usize, usize)> =
            t.edges().iter().map(|&(u, v, _)| (u, v)).collect();
        let is_leaf: Vec<bool> = (0..t.node_count()).map(|v| t.is_leaf(v)).collect();
        // suppress degree-2 internal nodes (a designated root, typically)
        loop {
            let mut degree = vec![0usize; t.node_count()];
            for &(u, v) in &edges {
                degree[u] += 1;
                degree[v] += 1;
            }
            let Some(mid) = (0..t.node_count()).find(|&v| !is_leaf[v] && degree[v] == 2)
            else {
                break;
            };
            let nb: Vec<usize> = edges
                .iter()
                .filter(|&&(a, b)| a == mid || b == mid)
                .map(|&(a, b)| if a == mid { b } else { a })
                .collect();
            edges.retain(|&(a, b)| a != mid && b != mid);
            edges.push((nb[0], nb[1]));
        }
        // renumber survivors; leaves ordered by their original labels
        let mut ids: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let mut leaf_ids: Vec<usize> = ids.iter().copied().filter(|&v| is_leaf[v]).collect();
        leaf_ids.sort_by_key(|&v| t.label(v).map(str::to_string));
        let slot_of: BTreeMap<usize, usize> =
            leaf_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let index: BTreeMap<usize, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let labels: Vec<Option<String>> = ids
            .iter()
            .map(|v| slot_of.get(v).map(|s| format!("L{s}")))
            .collect();
        let unit_edges: Vec<(usize, usize, u64)> = edges
            .iter()
            .map(|&(u, v)| (index[&u], index[&v], 1))
            .collect();
        Self::from_unit_tree(WeightedTree::new(labels, unit_edges)?)
    }

    /// The underlying unit-weight tree; its edge order is the weight-vector
    /// order used throughout the solver.
    pub fn tree(&self) -> &WeightedTree {
        &self.tree
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_nodes.len()
    }

    /// Tree node id realizing a slot.
    pub fn leaf_node(&self, slot: usize) -> usize {
        self.leaf_nodes[slot]
    }

    /// Every slot permutation induced by a tree symmetry, identity included.
    pub fn automorphisms(&self) -> &[Vec<usize>] {
        &self.autos
    }

    pub fn automorphism_order(&self) -> usize {
        self.autos.len()
    }
}

/// All slot permutations preserving the hop-distance matrix. For trees
/// without degree-2 internal nodes the leaf metric determines the shape, so
/// these are exactly the leaf actions of the tree's automorphism group.
fn slot_automorphisms(tree: &WeightedTree, leaf_nodes: &[usize]) -> Vec<Vec<usize>> {
    let n = leaf_nodes.len();
    let mut d = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let dist = tree.distance_between_nodes(leaf_nodes[i], leaf_nodes[j]);
            d[i][j] = dist;
            d[j][i] = dist;
        }
    }
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        i: usize,
        n: usize,
        d: &[Vec<u64>],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n {
            out.push(perm.clone());
            return;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            if (0..i).all(|k| d[i][k] == d[j][perm[k]]) {
                perm[i] = j;
                used[j] = true;
                rec(i + 1, n, d, perm, used, out);
                used[j] = false;
            }
        }
    }
    rec(0, n, &d, &mut perm, &mut used, &mut out);
    out
}

/// Lexicographic next permutation; false when already the last.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// One representative per orbit of the automorphism group acting on
/// node→slot bijections (by relabeling slots). The representative is the
/// lexicographically smallest member of its orbit, and representatives are
/// yielded in ascending order. The action is free — `π∘σ = σ` forces
/// `π = id` — so every orbit has exactly `automorphism_order()` members and
/// the stream has length `n! / automorphism_order()`.
///
/// Panics if `n` differs from the topology's slot count.
pub fn assignments_mod_automorphism(
    topology: &Topology,
    n: usize,
) -> impl Iterator<Item = LeafAssignment> + '_ {
    assert_eq!(
        topology.leaf_count(),
        n,
        "assignment enumeration needs one slot per graph node"
    );
    let mut current: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        loop {
            let candidate = current.take()?;
            let mut next = candidate.clone();
            if next_permutation(&mut next) {
                current = Some(next);
            }
            if is_orbit_minimum(&candidate, topology.automorphisms()) {
                return Some(LeafAssignment { slots: candidate });
            }
        }
    })
}

/// True when `sigma` is lexicographically ≤ every `π ∘ sigma`.
fn is_orbit_minimum(sigma: &[usize], autos: &[Vec<usize>]) -> bool {
    autos.iter().all(|pi| {
        for (node, &s) in sigma.iter().enumerate() {
            let mapped = pi[s];
            if mapped < sigma[node] {
                return false;
            }
            if mapped > sigma[node] {
                break;
            }
        }
        true
    })
}

/// The caterpillar shape: a spine of internal nodes with every leaf one edge
/// off the spine. `n = 2` is a single edge, `n = 3` the 3-leaf star.
pub fn caterpillar_topology(n: usize) -> Result<Topology, TopologyError> {
    if !(2..=16).contains(&n) {
        return Err(TopologyError::LeafCountOutOfRange { n, min: 2, max: 16 });
    }
    let mut labels: Vec<Option<String>> = (0..n).map(|i| Some(format!("L{i}"))).collect();
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    match n {
        2 => edges.push((0, 1, 1)),
        3 => {
            labels.push(None);
            edges.extend([(0, 3, 1), (1, 3, 1), (2, 3, 1)]);
        }
        _ => {
            let spine: Vec<usize> = (0..n - 2).map(|i| n + i).collect();
            labels.extend(std::iter::repeat_with(|| None).take(n - 2));
            for pair in spine.windows(2) {
                edges.push((pair[0], pair[1], 1));
            }
            edges.push((0, spine[0], 1));
            edges.push((1, spine[0], 1));
            for i in 1..n - 3 {
                edges.push((i + 1, spine[i], 1));
            }
            edges.push((n - 2, spine[n - 3], 1));
            edges.push((n - 1, spine[n - 3], 1));
        }
    }
    Topology::from_unit_tree(WeightedTree::new(labels, edges)?)
}

/// The perfectly balanced shape on a power-of-two leaf count, in unrooted
/// form: the nominal degree-2 root is suppressed, leaving two mirrored
/// halves joined by a central edge (for `n = 2`, a single edge; for `n = 4`
/// this coincides with the quartet).
pub fn complete_binary_topology(n: usize) -> Result<Topology, TopologyError> {
    if !n.is_power_of_two() || n < 2 {
        return Err(TopologyError::NotPowerOfTwo(n));
    }
    if n > 16 {
        return Err(TopologyError::LeafCountOutOfRange { n, min: 2, max: 16 });
    }
    fn build(
        labels: &mut Vec<Option<String>>,
        edges: &mut Vec<(usize, usize, u64)>,
        next_leaf: &mut usize,
        leaves: usize,
    ) -> usize {
        if leaves == 1 {
            labels.push(Some(format!("L{}", *next_leaf)));
            *next_leaf += 1;
            labels.len() - 1
        } else {
            let l = build(labels, edges, next_leaf, leaves / 2);
            let r = build(labels, edges, next_leaf, leaves / 2);
            labels.push(None);
            let v = labels.len() - 1;
            edges.push((v, l, 1));
            edges.push((v, r, 1));
            v
        }
    }
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut next_leaf = 0;
    let c1 = build(&mut labels, &mut edges, &mut next_leaf, n / 2);
    let c2 = build(&mut labels, &mut edges, &mut next_leaf, n / 2);
    edges.push((c1, c2, 1));
    Topology::from_unit_tree(WeightedTree::new(labels, edges)?)
}

/// All pairwise non-isomorphic full binary shapes with `n` leaves,
/// `3 ≤ n ≤ 10`, in a fixed deterministic order. Shapes are grown by
/// inserting one leaf at a time into every edge and deduplicated by a
/// canonical form rooted at the tree center.
pub fn enumerate_topologies(n: usize) -> Result<Vec<Topology>, TopologyError> {
    if !(3..=10).contains(&n) {
        return Err(TopologyError::LeafCountOutOfRange { n, min: 3, max: 10 });
    }
    // shapes as adjacency lists; start from the 3-leaf star
    let star3 = vec![vec![3], vec![3], vec![3], vec![0, 1, 2]];
    let mut level: Vec<Vec<Vec<usize>>> = vec![star3];
    let mut leaves = 3;
    while leaves < n {
        let mut next: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
        for shape in &level {
            for (u, v) in shape_edges(shape) {
                let grown = insert_leaf(shape, u, v);
                next.entry(shape_canonical(&grown)).or_insert(grown);
            }
        }
        level = next.into_values().collect();
        leaves += 1;
    }
    level.into_iter().map(|shape| shape_to_topology(&shape)).collect()
}

fn shape_edges(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (u, nb) in adj.iter().enumerate() {
        for &v in nb {
            if u < v {
                out.push((u, v));
            }
        }
    }
    out
}

/// Subdivide edge (u,v) with a new internal node and hang a new leaf off it.
fn insert_leaf(adj: &[Vec<usize>], u: usize, v: usize) -> Vec<Vec<usize>> {
    let mut next: Vec<Vec<usize>> = adj.to_vec();
    let mid = next.len();
    let leaf = next.len() + 1;
    next.push(vec![u, v, leaf]);
    next.push(vec![mid]);
    for x in next[u].iter_mut() {
        if *x == v {
            *x = mid;
        }
    }
    for x in next[v].iter_mut() {
        if *x == u {
            *x = mid;
        }
    }
    next
}

/// Canonical form of an unlabeled shape: the minimum over the tree's one or
/// two center nodes of the sorted-subtree string rooted there.
pub(crate) fn shape_canonical(adj: &[Vec<usize>]) -> String {
    fn encode(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
        let mut parts: Vec<String> = adj[v]
            .iter()
            .filter(|&&y| Some(y) != parent)
            .map(|&y| encode(adj, y, Some(v)))
            .collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    centers(adj)
        .into_iter()
        .map(|c| encode(adj, c, None))
        .min()
        .expect("tree has a center")
}

/// The one or two middle nodes of the tree, found by repeatedly stripping
/// leaves.
fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut frontier: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &frontier {
            removed[v] = true;
            remaining -= 1;
            for &y in &adj[v] {
                if !removed[y] {
                    degree[y] -= 1;
                    if degree[y] == 1 {
                        next.push(y);
                    }
                }
            }
        }
        frontier = next;
    }
    (0..n).filter(|&v| !removed[v]).collect()
}

fn shape_to_topology(adj: &[Vec<usize>]) -> Result<Topology, TopologyError> {
    let mut slot = 0;
    let labels: Vec<Option<String>> = adj
        .iter()
        .map(|nb| {
            if nb.len() == 1 {
                let l = format!("L{slot}");
                slot += 1;
                Some(l)
            } else {
                None
            }
        })
        .collect();
    let edges: Vec<(usize, usize, u64)> = shape_edges(adj)
        .into_iter()
        .map(|(u, v)| (u, v, 1))
        .collect();
    Topology::from_unit_tree(WeightedTree::new(labels, edges)?)
}

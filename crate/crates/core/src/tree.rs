//! Edge-weighted trees with labeled leaves, leaf distance matrices, and the
//! normalization to full binary form.
//!
//! Trees here are the "T" side of a witness: every leaf carries a unique
//! label, internal nodes are anonymous, and all edge weights are non-negative
//! integers. Distances between leaves are path sums, so everything downstream
//! (interval extraction, verification, search) works in exact integer
//! arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree must have at least one node")]
    Empty,
    #[error("node {node} out of range for a tree on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge between nodes {0} and {1}")]
    DuplicateEdge(usize, usize),
    #[error("edge set does not form a tree: {0}")]
    NotATree(String),
    #[error("node {0} has degree {1} but carries no label; only internal nodes may be unlabeled")]
    UnlabeledLeaf(usize, usize),
    #[error("node {node} has degree {degree} but carries label {label:?}; labels belong on leaves")]
    LabeledInternal {
        node: usize,
        degree: usize,
        label: String,
    },
    #[error("leaf label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("operation needs at least {needed} leaves, tree has {have}")]
    TooFewLeaves { needed: usize, have: usize },
    #[error("no edge between nodes {0} and {1}")]
    NoSuchEdge(usize, usize),
    #[error("cannot split weight-{weight} edge at {at}; the first part must not exceed the weight")]
    SplitTooLarge { weight: u64, at: u64 },
    #[error("node {0} is a leaf; an internal node is required")]
    NotInternal(usize),
    #[error("tree has no internal node")]
    NoInternalNode,
    #[error("leaf label {0:?} not present in tree")]
    UnknownLabel(String),
    #[error("weight vector has {got} entries, tree has {expected} edges")]
    WeightCountMismatch { expected: usize, got: usize },
}

/// An edge-weighted tree whose leaves carry unique labels.
///
/// Nodes are indexed `0..node_count()`. Every node of degree ≤ 1 must be
/// labeled (it is a leaf); nodes of degree ≥ 2 must be anonymous. A single
/// isolated node counts as a leaf. An optional root is carried as metadata
/// for serialization; distances never depend on it.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedTree {
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize, u64)>,
    adj: Vec<Vec<(usize, u64)>>,
    root: Option<usize>,
}

impl WeightedTree {
    /// Build and validate a tree. `labels.len()` is the node count; edges are
    /// `(u, v, weight)` triples. Fails unless the edges form a tree and the
    /// labeling matches the leaf set exactly.
    pub fn new(
        labels: Vec<Option<String>>,
        edges: Vec<(usize, usize, u64)>,
    ) -> Result<Self, TreeError> {
        Self::with_root(labels, edges, None)
    }

    /// Like [`WeightedTree::new`] but records a designated root node.
    pub fn with_root(
        labels: Vec<Option<String>>,
        edges: Vec<(usize, usize, u64)>,
        root: Option<usize>,
    ) -> Result<Self, TreeError> {
        let n = labels.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if let Some(r) = root {
            if r >= n {
                return Err(TreeError::NodeOutOfRange { node: r, n });
            }
        }
        if edges.len() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "{} nodes need {} edges, got {}",
                n,
                n - 1,
                edges.len()
            )));
        }
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u >= n {
                return Err(TreeError::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(TreeError::NodeOutOfRange { node: v, n });
            }
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
            if adj[u].iter().any(|&(x, _)| x == v) {
                return Err(TreeError::DuplicateEdge(u, v));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        // connectivity: |edges| = n − 1 plus connected ⇒ acyclic
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &(y, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        if count != n {
            return Err(TreeError::NotATree(format!(
                "only {count} of {n} nodes reachable from node 0"
            )));
        }
        let mut used = BTreeMap::new();
        for v in 0..n {
            let degree = adj[v].len();
            match (&labels[v], degree) {
                (None, d) if d <= 1 => return Err(TreeError::UnlabeledLeaf(v, d)),
                (Some(label), d) if d >= 2 => {
                    return Err(TreeError::LabeledInternal {
                        node: v,
                        degree: d,
                        label: label.clone(),
                    });
                }
                (Some(label), _) => {
                    if used.insert(label.clone(), v).is_some() {
                        return Err(TreeError::DuplicateLabel(label.clone()));
                    }
                }
                _ => {}
            }
        }
        Ok(WeightedTree {
            labels,
            edges,
            adj,
            root,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in construction order; the order is contractual for
    /// [`WeightedTree::with_weights`].
    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.adj[v].len() <= 1
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    /// Leaf node ids in ascending order.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn leaf_count(&self) -> usize {
        (0..self.node_count()).filter(|&v| self.is_leaf(v)).count()
    }

    /// Leaf labels in ascending node-id order.
    pub fn leaf_labels(&self) -> Vec<&str> {
        self.leaves()
            .into_iter()
            .map(|v| self.labels[v].as_deref().expect("leaves are labeled"))
            .collect()
    }

    pub fn leaf_by_label(&self, label: &str) -> Option<usize> {
        (0..self.node_count()).find(|&v| self.labels[v].as_deref() == Some(label))
    }

    /// Internal (anonymous) node ids in ascending order.
    pub fn internal_nodes(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| !self.is_leaf(v)).collect()
    }

    /// Weighted distance between two arbitrary nodes (path sum).
    pub fn distance_between_nodes(&self, a: usize, b: usize) -> u64 {
        let mut dist = vec![u64::MAX; self.node_count()];
        let mut stack = vec![a];
        dist[a] = 0;
        while let Some(x) = stack.pop() {
            if x == b {
                break;
            }
            for &(y, w) in &self.adj[x] {
                if dist[y] == u64::MAX {
                    dist[y] = dist[x] + w;
                    stack.push(y);
                }
            }
        }
        dist[b]
    }

    /// All pairwise leaf distances, indexed by lexicographically sorted leaf
    /// labels.
    pub fn leaf_distance_matrix(&self) -> DistanceMatrix {
        let mut order: Vec<usize> = self.leaves();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let labels: Vec<String> = order
            .iter()
            .map(|&v| self.labels[v].clone().expect("leaves are labeled"))
            .collect();
        let m = order.len();
        let mut d = vec![0u64; m * m];
        for (i, &leaf) in order.iter().enumerate() {
            // DFS from each leaf; paths in a tree are unique
            let mut dist = vec![u64::MAX; self.node_count()];
            let mut stack = vec![leaf];
            dist[leaf] = 0;
            while let Some(x) = stack.pop() {
                for &(y, w) in &self.adj[x] {
                    if dist[y] == u64::MAX {
                        dist[y] = dist[x] + w;
                        stack.push(y);
                    }
                }
            }
            for (j, &other) in order.iter().enumerate() {
                d[i * m + j] = dist[other];
            }
        }
        DistanceMatrix { labels, d }
    }

    /// Maximum leaf-to-leaf distance (the construction literature's `p`);
    /// `None` when the tree has fewer than two leaves.
    pub fn max_leaf_distance(&self) -> Option<u64> {
        let dm = self.leaf_distance_matrix();
        if dm.len() < 2 { None } else { Some(dm.max()) }
    }

    /// True when every internal node has degree 3, except that one node may
    /// have degree 2 provided it is the designated root (or no root is
    /// designated).
    pub fn is_full_binary(&self) -> bool {
        let mut degree_two = Vec::new();
        for v in self.internal_nodes() {
            match self.degree(v) {
                3 => {}
                2 => degree_two.push(v),
                _ => return false,
            }
        }
        match degree_two.as_slice() {
            [] => true,
            [v] => self.root.is_none() || self.root == Some(*v),
            _ => false,
        }
    }

    /// Strict unrooted reading: every internal node has degree exactly 3.
    pub fn is_full_binary_unrooted(&self) -> bool {
        self.internal_nodes().iter().all(|&v| self.degree(v) == 3)
    }

    /// True when deleting all leaves yields a (possibly empty) path: every
    /// leaf hangs one edge off a central spine. Equivalently, no internal
    /// node has three or more internal neighbors.
    pub fn is_caterpillar(&self) -> bool {
        self.internal_nodes().iter().all(|&v| {
            self.adj[v].iter().filter(|&&(y, _)| !self.is_leaf(y)).count() <= 2
        })
    }

    /// Restructure into a tree with the same leaves, the same pairwise leaf
    /// distances, and every internal node of degree exactly 3:
    ///
    /// 1. every internal node of degree 2 is suppressed, its two incident
    ///    edges merged into one with summed weight;
    /// 2. every internal node of degree `d > 3` becomes a chain of `d − 2`
    ///    degree-3 nodes joined by weight-0 edges.
    ///
    /// Internal node ids are not preserved; leaf labels are.
    pub fn binarize(&self) -> Result<WeightedTree, TreeError> {
        let have = self.leaf_count();
        if have < 3 {
            return Err(TreeError::TooFewLeaves { needed: 3, have });
        }
        // work on a virtual edge list; fresh internal ids grow past node_count
        let mut edges = self.edges.clone();
        let mut labels: BTreeMap<usize, String> = (0..self.node_count())
            .filter_map(|v| self.labels[v].clone().map(|l| (v, l)))
            .collect();
        let mut next = self.node_count();

        let adjacency = |edges: &[(usize, usize, u64)]| {
            let mut adj: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
            for &(u, v, w) in edges {
                adj.entry(u).or_default().push((v, w));
                adj.entry(v).or_default().push((u, w));
            }
            adj
        };

        // (1) suppress degree-2 internal nodes (smallest id first)
        loop {
            let adj = adjacency(&edges);
            let target = adj
                .iter()
                .find(|(v, nb)| nb.len() == 2 && !labels.contains_key(*v))
                .map(|(&v, nb)| (v, nb.clone()));
            let Some((v, nb)) = target else { break };
            let (a, wa) = nb[0];
            let (b, wb) = nb[1];
            edges.retain(|&(x, y, _)| x != v && y != v);
            edges.push((a, b, wa + wb));
        }

        // (2) expand internal nodes of degree > 3 into weight-0 chains
        loop {
            let adj = adjacency(&edges);
            let target = adj
                .iter()
                .find(|(v, nb)| nb.len() > 3 && !labels.contains_key(*v))
                .map(|(&v, nb)| (v, nb.clone()));
            let Some((v, nb)) = target else { break };
            let d = nb.len();
            edges.retain(|&(x, y, _)| x != v && y != v);
            let chain: Vec<usize> = (0..d - 2).map(|i| next + i).collect();
            next += d - 2;
            for pair in chain.windows(2) {
                edges.push((pair[0], pair[1], 0));
            }
            edges.push((nb[0].0, chain[0], nb[0].1));
            edges.push((nb[1].0, chain[0], nb[1].1));
            for i in 2..d - 2 {
                edges.push((nb[i].0, chain[i - 1], nb[i].1));
            }
            edges.push((nb[d - 2].0, chain[d - 3], nb[d - 2].1));
            edges.push((nb[d - 1].0, chain[d - 3], nb[d - 1].1));
        }

        // compact surviving ids to 0..m preserving relative order
        let mut ids: Vec<usize> = edges
            .iter()
            .flat_map(|&(u, v, _)| [u, v])
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let index: BTreeMap<usize, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let new_labels: Vec<Option<String>> =
            ids.iter().map(|v| labels.remove(v)).collect();
        let new_edges: Vec<(usize, usize, u64)> = edges
            .into_iter()
            .map(|(u, v, w)| (index[&u], index[&v], w))
            .collect();
        WeightedTree::new(new_labels, new_edges)
    }

    /// Same shape with this weight vector applied in [`WeightedTree::edges`]
    /// order.
    pub fn with_weights(&self, weights: &[u64]) -> Result<WeightedTree, TreeError> {
        if weights.len() != self.edges.len() {
            return Err(TreeError::WeightCountMismatch {
                expected: self.edges.len(),
                got: weights.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(&(u, v, _), &w)| (u, v, w))
            .collect();
        WeightedTree::with_root(self.labels.clone(), edges, self.root)
    }

    /// Attach a new labeled leaf to internal node `at`; returns the tree and
    /// the new leaf's node id (always the old `node_count`).
    pub fn with_leaf_attached(
        &self,
        at: usize,
        label: &str,
        weight: u64,
    ) -> Result<(WeightedTree, usize), TreeError> {
        let n = self.node_count();
        if at >= n {
            return Err(TreeError::NodeOutOfRange { node: at, n });
        }
        if self.is_leaf(at) {
            return Err(TreeError::NotInternal(at));
        }
        if self.leaf_by_label(label).is_some() {
            return Err(TreeError::DuplicateLabel(label.to_string()));
        }
        let mut labels = self.labels.clone();
        labels.push(Some(label.to_string()));
        let mut edges = self.edges.clone();
        edges.push((at, n, weight));
        Ok((WeightedTree::with_root(labels, edges, self.root)?, n))
    }

    /// Split the edge `(u, v)` of weight `w` into `(u, m) = first` and
    /// `(m, v) = w − first` through a new anonymous node `m`; returns the
    /// tree and `m`'s id. Distances are unchanged.
    pub fn with_edge_split(
        &self,
        u: usize,
        v: usize,
        first: u64,
    ) -> Result<(WeightedTree, usize), TreeError> {
        let w = self
            .edges
            .iter()
            .find(|&&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u))
            .map(|&(_, _, w)| w)
            .ok_or(TreeError::NoSuchEdge(u, v))?;
        if first > w {
            return Err(TreeError::SplitTooLarge { weight: w, at: first });
        }
        let m = self.node_count();
        let mut labels = self.labels.clone();
        labels.push(None);
        let mut edges: Vec<(usize, usize, u64)> = self
            .edges
            .iter()
            .filter(|&&(a, b, _)| (a, b) != (u, v) && (a, b) != (v, u))
            .copied()
            .collect();
        edges.push((u, m, first));
        edges.push((m, v, w - first));
        Ok((WeightedTree::with_root(labels, edges, self.root)?, m))
    }

    /// Add `delta` to each edge weight once per leaf endpoint (an edge whose
    /// both endpoints are leaves gains `2 × delta`). Every leaf-to-leaf
    /// distance grows by exactly `2 × delta`.
    pub fn with_leaf_edges_augmented(&self, delta: u64) -> WeightedTree {
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, w)| {
                let ends = self.is_leaf(u) as u64 + self.is_leaf(v) as u64;
                (u, v, w + delta * ends)
            })
            .collect();
        WeightedTree::with_root(self.labels.clone(), edges, self.root)
            .expect("reweighting preserves tree structure")
    }

    /// Exact shape-and-label equality up to node renumbering: compares
    /// canonical serializations rooted at the smallest leaf label.
    pub fn structurally_equal(&self, other: &WeightedTree) -> bool {
        fn canonical(t: &WeightedTree) -> String {
            fn enc(t: &WeightedTree, v: usize, parent: Option<usize>) -> String {
                let mut parts: Vec<String> = t
                    .neighbors(v)
                    .iter()
                    .filter(|&&(y, _)| Some(y) != parent)
                    .map(|&(y, w)| format!("{}:{w}", enc(t, y, Some(v))))
                    .collect();
                parts.sort();
                match t.label(v) {
                    Some(l) if parts.is_empty() => l.to_string(),
                    Some(l) => format!("({})@{l}", parts.join(",")),
                    None => format!("({})", parts.join(",")),
                }
            }
            let start = t
                .leaves()
                .into_iter()
                .min_by_key(|&v| t.label(v).map(str::to_string))
                .expect("tree has a leaf");
            enc(t, start, None)
        }
        canonical(self) == canonical(other)
    }
}

impl fmt::Debug for WeightedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WeightedTree(nodes={}, edges={:?}, labels={:?})",
            self.node_count(),
            self.edges,
            self.labels
        )
    }
}

/// Symmetric matrix of pairwise leaf distances, indexed by sorted labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    d: Vec<u64>,
}

impl DistanceMatrix {
    /// Leaf labels in ascending order; row/column `i` belongs to `labels[i]`.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of leaves.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.d[i * self.labels.len() + j]
    }

    pub fn by_label(&self, a: &str, b: &str) -> Option<u64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.get(i, j))
    }

    /// Largest entry (0 for degenerate matrices).
    pub fn max(&self) -> u64 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// Upper-triangle entries as `(i, j, distance)` with `i < j`.
    pub fn iter_pairs(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let m = self.labels.len();
        (0..m).flat_map(move |i| (i + 1..m).map(move |j| (i, j, self.get(i, j))))
    }
}

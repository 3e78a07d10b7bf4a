//! Test-only generators and independently-coded reference implementations.
//!
//! Everything here exists to check the main crate against a second opinion:
//! the oracles recompute the same quantities by a deliberately different
//! method (Floyd–Warshall instead of per-leaf DFS, labeled growth with
//! pairwise isomorphism instead of canonical strings, block enumeration
//! instead of a linear run walk, a full `n!` scan instead of backtracking).
//! Keeping both routes alive is the point — none of these should ever be
//! replaced by a call into the code they test.

pub mod lp;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pcglab_core::{DistanceMatrix, Graph, Topology, WeightedTree};

/// The one seeded generator used across the test suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---- random instances ------------------------------------------------

/// Random labeled graph with each edge present independently with
/// probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n).expect("n >= 1");
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("valid pair");
            }
        }
    }
    g
}

/// Random tree on `n` nodes from a uniform Prüfer sequence, with leaves
/// labeled `L0..` in node order and weights drawn from `0..=max_weight`.
pub fn random_weighted_tree(rng: &mut impl Rng, n: usize, max_weight: u64) -> WeightedTree {
    assert!(n >= 2, "a weighted tree oracle needs at least one edge");
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
    let weights: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(0..=max_weight)).collect();
    weighted_tree_from_prufer(n, &seq, &weights)
}

/// Deterministic tree builder: decode a Prüfer sequence over `0..n`, label
/// the leaves `L0..` in node order, weight the edges in decode order.
pub fn weighted_tree_from_prufer(n: usize, seq: &[usize], weights: &[u64]) -> WeightedTree {
    assert!(n >= 2);
    assert_eq!(weights.len(), n - 1);
    let edges: Vec<(usize, usize)> = if n == 2 {
        vec![(0, 1)]
    } else {
        prufer_decode(n, seq)
    };
    let mut degree = vec![0usize; n];
    for &(u, v) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut next_label = 0;
    let labels: Vec<Option<String>> = (0..n)
        .map(|v| {
            if degree[v] == 1 {
                let l = format!("L{next_label}");
                next_label += 1;
                Some(l)
            } else {
                None
            }
        })
        .collect();
    let weighted = edges
        .into_iter()
        .zip(weights)
        .map(|((u, v), &w)| (u, v, w))
        .collect();
    WeightedTree::new(labels, weighted).expect("decoded tree is valid")
}

/// Standard Prüfer decoding: the tree on `0..n` whose sequence is `seq`.
fn prufer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = *leaves.iter().next().expect("a leaf always remains");
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let mut rest = leaves.into_iter();
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((a, b));
    edges
}

// ---- distance oracles ------------------------------------------------

/// Leaf distances recomputed by Floyd–Warshall over all tree nodes, then
/// restricted to leaves in label order. Same contract as the main crate's
/// per-leaf traversal, different algorithm.
pub fn floyd_warshall_leaf_distances(tree: &WeightedTree) -> (Vec<String>, Vec<Vec<u64>>) {
    let n = tree.node_count();
    const INF: u64 = u64::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v, w) in tree.edges() {
        d[u][v] = w;
        d[v][u] = w;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let mut leaves: Vec<usize> = tree.leaves();
    leaves.sort_by_key(|&v| tree.label(v).expect("leaves are labeled").to_string());
    let labels = leaves
        .iter()
        .map(|&v| tree.label(v).unwrap().to_string())
        .collect();
    let matrix = leaves
        .iter()
        .map(|&a| leaves.iter().map(|&b| d[a][b]).collect())
        .collect();
    (labels, matrix)
}

/// Whether the four-point condition holds: for every four leaves, the two
/// largest of the three pairing sums are equal. True of every tree metric.
pub fn four_point_holds(dm: &DistanceMatrix) -> bool {
    let n = dm.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let mut sums = [
                        dm.get(i, j) + dm.get(k, l),
                        dm.get(i, k) + dm.get(j, l),
                        dm.get(i, l) + dm.get(j, k),
                    ];
                    sums.sort();
                    if sums[1] != sums[2] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---- interval oracle -------------------------------------------------

/// Minimal family of disjoint intervals covering every edge value and no
/// non-edge value, by brute force: any tight family corresponds to a cut
/// of the sorted edge values into consecutive blocks, so all block counts
/// and cut positions are tried in increasing order.
pub fn brute_force_intervals(
    edge_values: &BTreeSet<u64>,
    non_edge_values: &BTreeSet<u64>,
    k: usize,
) -> Option<Vec<(u64, u64)>> {
    if edge_values.intersection(non_edge_values).next().is_some() {
        return None;
    }
    if edge_values.is_empty() {
        return Some(Vec::new());
    }
    let vals: Vec<u64> = edge_values.iter().copied().collect();
    let gaps = vals.len() - 1;
    for blocks in 1..=k.min(vals.len()) {
        let mut found = None;
        combinations(gaps, blocks - 1, &mut |cuts| {
            if found.is_some() {
                return;
            }
            let mut intervals = Vec::with_capacity(blocks);
            let mut start = 0usize;
            for &c in cuts {
                intervals.push((vals[start], vals[c]));
                start = c + 1;
            }
            intervals.push((vals[start], vals[vals.len() - 1]));
            let clean = intervals
                .iter()
                .all(|&(a, b)| !non_edge_values.iter().any(|&v| a <= v && v <= b));
            if clean {
                found = Some(intervals);
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Visit every `size`-subset of `0..pool` in lexicographic order. Cut
/// positions for the block oracle; nothing fancier needed.
fn combinations(pool: usize, size: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(pool: usize, size: usize, start: usize, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if acc.len() == size {
            visit(acc);
            return;
        }
        for i in start..pool {
            acc.push(i);
            rec(pool, size, i + 1, acc, visit);
            acc.pop();
        }
    }
    rec(pool, size, 0, &mut Vec::new(), visit);
}

/// Edge and non-edge distance value sets for a graph placed on a tree by
/// an explicit node-to-label assignment.
pub fn distance_value_sets(
    g: &Graph,
    tree: &WeightedTree,
    assignment: &BTreeMap<usize, String>,
) -> (BTreeSet<u64>, BTreeSet<u64>) {
    let (labels, matrix) = floyd_warshall_leaf_distances(tree);
    let index: BTreeMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut edge_values = BTreeSet::new();
    let mut non_edge_values = BTreeSet::new();
    for (u, v) in g.pairs() {
        let a = index[assignment[&u].as_str()];
        let b = index[assignment[&v].as_str()];
        let d = matrix[a][b];
        if g.has_edge(u, v) {
            edge_values.insert(d);
        } else {
            non_edge_values.insert(d);
        }
    }
    (edge_values, non_edge_values)
}

// ---- graph census ----------------------------------------------------

/// Every labeled graph on `n` nodes, by counting through all edge subsets.
pub fn all_labeled_graphs(n: usize) -> Vec<Graph> {
    let pairs = n * (n - 1) / 2;
    (0..1u128 << pairs)
        .map(|bits| Graph::from_triangle_bits(n, bits).expect("bits fit"))
        .collect()
}

/// One representative per isomorphism class, as the graph whose adjacency
/// bits are the class's canonical form.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    let mut seen = BTreeSet::new();
    for g in all_labeled_graphs(n) {
        seen.insert(g.canonical_bits());
    }
    seen.into_iter()
        .map(|bits| Graph::from_triangle_bits(n, bits).expect("canonical bits fit"))
        .collect()
}

// ---- shape oracles ---------------------------------------------------

/// `(2n − 5)!!`, the number of distinct leaf-labeled unrooted full binary
/// shapes on `n` leaves (1 for `n = 2`).
pub fn labeled_shape_count(n: usize) -> u64 {
    assert!(n >= 2);
    let mut count = 1u64;
    let mut f = 1i64;
    while f <= 2 * (n as i64) - 5 {
        count *= f as u64;
        f += 2;
    }
    count
}

/// Unlabeled full binary shapes on `n` leaves by a route independent of
/// the main crate's: grow every leaf-labeled shape (each insertion point
/// of each smaller shape), then deduplicate by pairwise backtracking
/// isomorphism. Returns unit-weight trees with leaves labeled `L0..`.
pub fn shapes_by_growth(n: usize) -> Vec<WeightedTree> {
    assert!((2..=8).contains(&n), "growth oracle is sized for small n");
    // labeled growth: a tree is a list of edges over nodes 0.. with leaves
    // 0..m being the labeled ones
    #[derive(Clone)]
    struct Shape {
        leaves: usize,
        nodes: usize,
        edges: Vec<(usize, usize)>,
    }
    let mut level = vec![Shape {
        leaves: 2,
        nodes: 2,
        edges: vec![(0, 1)],
    }];
    for m in 3..=n {
        let mut next = Vec::new();
        for s in &level {
            for i in 0..s.edges.len() {
                // renumber so the new leaf becomes node m-1: old labeled
                // leaves keep their ids, internals shift up by one
                let shift = |v: usize| if v < m - 1 { v } else { v + 1 };
                let (a, b) = s.edges[i];
                let mut edges: Vec<(usize, usize)> = s
                    .edges
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &(u, v))| (shift(u), shift(v)))
                    .collect();
                let mid = s.nodes + 1; // after shifting, ids m-1 and nodes+1 are free
                edges.push((shift(a), mid));
                edges.push((mid, shift(b)));
                edges.push((mid, m - 1));
                next.push(Shape {
                    leaves: m,
                    nodes: s.nodes + 2,
                    edges,
                });
            }
        }
        level = next;
    }
    assert_eq!(level.len() as u64, labeled_shape_count(n));
    let as_tree = |s: &Shape| -> WeightedTree {
        let labels = (0..s.nodes)
            .map(|v| (v < s.leaves).then(|| format!("L{v}")))
            .collect();
        let edges = s.edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        WeightedTree::new(labels, edges).expect("grown shape is a valid tree")
    };
    let mut reps: Vec<WeightedTree> = Vec::new();
    for s in &level {
        let t = as_tree(s);
        if !reps.iter().any(|r| trees_isomorphic(r, &t)) {
            reps.push(t);
        }
    }
    reps
}

/// Unlabeled tree isomorphism by plain backtracking over adjacency,
/// ignoring labels and weights.
pub fn trees_isomorphic(a: &WeightedTree, b: &WeightedTree) -> bool {
    let n = a.node_count();
    if n != b.node_count() {
        return false;
    }
    let adj = |t: &WeightedTree| -> Vec<Vec<usize>> {
        (0..t.node_count())
            .map(|v| t.neighbors(v).iter().map(|&(u, _)| u).collect())
            .collect()
    };
    let (adj_a, adj_b) = (adj(a), adj(b));
    // BFS order from node 0 of `a` so every node after the first has an
    // already-mapped neighbor to anchor on
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        for &u in &adj_a[order[i]] {
            if !seen[u] {
                seen[u] = true;
                order.push(u);
            }
        }
        i += 1;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn assign(
        idx: usize,
        order: &[usize],
        adj_a: &[Vec<usize>],
        adj_b: &[Vec<usize>],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        // candidates must match degree and be adjacent to the images of
        // all already-mapped neighbors
        for cand in 0..adj_b.len() {
            if used[cand] || adj_b[cand].len() != adj_a[v].len() {
                continue;
            }
            let ok = adj_a[v]
                .iter()
                .filter(|&&u| map[u] != usize::MAX)
                .all(|&u| adj_b[cand].contains(&map[u]));
            if !ok {
                continue;
            }
            map[v] = cand;
            used[cand] = true;
            if assign(idx + 1, order, adj_a, adj_b, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[cand] = false;
        }
        false
    }
    assign(0, &order, &adj_a, &adj_b, &mut map, &mut used)
}

// ---- symmetry oracles ------------------------------------------------

/// Unit hop distances between leaf slots of a shape.
fn slot_hop_matrix(topo: &Topology) -> Vec<Vec<u64>> {
    let n = topo.leaf_count();
    (0..n)
        .map(|s| {
            (0..n)
                .map(|t| {
                    topo.tree()
                        .distance_between_nodes(topo.leaf_node(s), topo.leaf_node(t))
                })
                .collect()
        })
        .collect()
}

/// Every slot permutation preserving hop distances, found by scanning all
/// `n!` permutations rather than backtracking.
pub fn hop_automorphisms_bruteforce(topo: &Topology) -> Vec<Vec<usize>> {
    let n = topo.leaf_count();
    let hop = slot_hop_matrix(topo);
    let mut result = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let preserves = (0..n)
            .all(|s| (0..n).all(|t| hop[s][t] == hop[perm[s]][perm[t]]));
        if preserves {
            result.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    result
}

/// Lexicographically smallest member of each orbit of node-to-slot
/// assignments under the shape's hop-preserving permutations, in order.
pub fn orbit_representatives_bruteforce(topo: &Topology) -> Vec<Vec<usize>> {
    let n = topo.leaf_count();
    let autos = hop_automorphisms_bruteforce(topo);
    let mut visited: HashSet<Vec<usize>> = HashSet::new();
    let mut reps = Vec::new();
    let mut sigma: Vec<usize> = (0..n).collect();
    loop {
        if !visited.contains(&sigma) {
            reps.push(sigma.clone());
            for pi in &autos {
                let image: Vec<usize> = sigma.iter().map(|&s| pi[s]).collect();
                visited.insert(image);
            }
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    reps
}

/// Lexicographic successor in place; false once the sequence is the last.
pub fn next_permutation(p: &mut [usize]) -> bool {
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

// ---- pruning-free search oracle --------------------------------------

/// Whether any (shape, assignment, weights) triple within the bounds
/// carries a witness with at most `k` intervals — checked with no orbit
/// reduction and no pruning, over the growth-oracle shapes, with distances
/// from Floyd–Warshall and feasibility from the block oracle.
pub fn exhaustive_feasible(g: &Graph, k: usize, min_weight: u64, max_weight: u64) -> bool {
    let n = g.node_count();
    if n == 1 {
        return true; // no pairs to constrain
    }
    for shape in shapes_by_growth(n) {
        let e = shape.edge_count();
        let mut sigma: Vec<usize> = (0..n).collect();
        loop {
            let assignment: BTreeMap<usize, String> = (0..n)
                .map(|node| (node, format!("L{}", sigma[node])))
                .collect();
            let mut weights = vec![min_weight; e];
            loop {
                let weighted = shape.with_weights(&weights).expect("edge count matches");
                let (edge_values, non_edge_values) =
                    distance_value_sets(g, &weighted, &assignment);
                if brute_force_intervals(&edge_values, &non_edge_values, k).is_some() {
                    return true;
                }
                // odometer step
                let mut pos = 0;
                loop {
                    if pos == e {
                        break;
                    }
                    if weights[pos] < max_weight {
                        weights[pos] += 1;
                        break;
                    }
                    weights[pos] = min_weight;
                    pos += 1;
                }
                if pos == e {
                    break;
                }
            }
            if !next_permutation(&mut sigma) {
                break;
            }
        }
    }
    false
}

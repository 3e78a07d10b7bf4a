//! Simple undirected graphs on at most 16 labeled nodes.
//!
//! Adjacency is stored as one bitmask row per node, so all pair queries are
//! single bit tests and canonical forms for small `n` can be computed by
//! brute force over node permutations.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the node count: adjacency rows must fit in a `u16`.
pub const MAX_NODES: usize = 16;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("graph has {0} nodes, the maximum supported is {MAX_NODES}")]
    TooManyNodes(usize),
    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("graph6: {reason} at byte offset {offset}")]
    Graph6 { reason: String, offset: usize },
    #[error("graph json: {0}")]
    Json(String),
}

/// A simple undirected graph on `n` labeled nodes `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: [u16; MAX_NODES],
}

impl Graph {
    /// An edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes(n));
        }
        Ok(Graph {
            n,
            rows: [0; MAX_NODES],
        })
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::new(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::new(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v)?;
            }
        }
        Ok(g)
    }

    /// Cycle 0-1-...-(n-1)-0; requires n >= 3.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::new(n)?;
        for u in 0..n {
            g.add_edge(u, (u + 1) % n)?;
        }
        Ok(g)
    }

    fn check_node(&self, u: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::NodeOutOfRange { node: u, n: self.n });
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        u != v && self.rows[u] & (1 << v) != 0
    }

    pub fn degree(&self, u: usize) -> usize {
        debug_assert!(u < self.n);
        self.rows[u].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Node pairs `(u, v)` with `u < v`, whether adjacent or not.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
    }

    /// Nodes adjacent to every other node.
    pub fn universal_nodes(&self) -> Vec<usize> {
        (0..self.n).filter(|&u| self.degree(u) == self.n - 1).collect()
    }

    /// Pairs `(u, v)` where `u` is adjacent to every node except exactly `v`.
    pub fn almost_universal_nodes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.n < 2 {
            return out;
        }
        for u in 0..self.n {
            if self.degree(u) == self.n - 2 {
                let v = (0..self.n)
                    .find(|&v| v != u && !self.has_edge(u, v))
                    .expect("degree n-2 node has a non-neighbor");
                out.push((u, v));
            }
        }
        out
    }

    /// The graph with node `u` deleted; remaining nodes are relabeled to
    /// `0..n-1` preserving their relative order.
    pub fn remove_node(&self, u: usize) -> Result<Self, GraphError> {
        self.check_node(u)?;
        if self.n < 2 {
            return Err(GraphError::Empty);
        }
        let map = |x: usize| if x < u { x } else { x - 1 };
        let mut g = Graph::new(self.n - 1)?;
        for (a, b) in self.edges() {
            if a != u && b != u {
                g.add_edge(map(a), map(b))?;
            }
        }
        Ok(g)
    }

    /// Upper-triangle adjacency bits in column-major order, the same order
    /// graph6 uses: pair (i, j) with i < j occupies bit `j(j-1)/2 + i`.
    pub fn triangle_bits(&self) -> u128 {
        let mut bits = 0u128;
        let mut idx = 0;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    bits |= 1 << idx;
                }
                idx += 1;
            }
        }
        bits
    }

    /// Rebuild a graph from `triangle_bits` output.
    pub fn from_triangle_bits(n: usize, bits: u128) -> Result<Self, GraphError> {
        let mut g = Graph::new(n)?;
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if bits & (1 << idx) != 0 {
                    g.add_edge(i, j)?;
                }
                idx += 1;
            }
        }
        Ok(g)
    }

    /// Minimum of `triangle_bits` over all node relabelings: a brute-force
    /// canonical form. Factorial in `n`; intended for n <= 9.
    pub fn canonical_bits(&self) -> u128 {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = u128::MAX;
        permute_all(&mut perm, 0, &mut |p| {
            let mut bits = 0u128;
            let mut idx = 0;
            for j in 1..self.n {
                for i in 0..j {
                    if self.has_edge(p[i], p[j]) {
                        bits |= 1 << idx;
                    }
                    idx += 1;
                }
            }
            if bits < best {
                best = bits;
            }
        });
        best
    }

    // ---- graph6 ------------------------------------------------------

    /// Parse one graph6-encoded graph. A leading `>>graph6<<` header is
    /// accepted and stripped; trailing newline/whitespace is not.
    pub fn parse_graph6(text: &str) -> Result<Self, GraphError> {
        const HEADER: &str = ">>graph6<<";
        let (body, base) = match text.strip_prefix(HEADER) {
            Some(rest) => (rest, HEADER.len()),
            None => (text, 0),
        };
        let bytes = body.as_bytes();
        if bytes.is_empty() {
            return Err(GraphError::Graph6 {
                reason: "empty input".into(),
                offset: base,
            });
        }
        for (i, &b) in bytes.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(GraphError::Graph6 {
                    reason: format!("byte 0x{b:02x} outside the graph6 range [63,126]"),
                    offset: base + i,
                });
            }
        }
        if bytes[0] == 126 {
            // multi-byte node counts start at n = 63; far beyond our cap
            return Err(GraphError::Graph6 {
                reason: "multi-byte node count (n >= 63) is not supported".into(),
                offset: base,
            });
        }
        let n = (bytes[0] - 63) as usize;
        if n == 0 {
            return Err(GraphError::Graph6 {
                reason: "graph on zero nodes".into(),
                offset: base,
            });
        }
        if n > MAX_NODES {
            return Err(GraphError::Graph6 {
                reason: format!("graph on {n} nodes, the maximum supported is {MAX_NODES}"),
                offset: base,
            });
        }
        let nbits = n * (n - 1) / 2;
        let expect = 1 + nbits.div_ceil(6);
        if bytes.len() < expect {
            return Err(GraphError::Graph6 {
                reason: format!("truncated: expected {expect} bytes, got {}", bytes.len()),
                offset: base + bytes.len(),
            });
        }
        if bytes.len() > expect {
            return Err(GraphError::Graph6 {
                reason: "trailing garbage after encoded graph".into(),
                offset: base + expect,
            });
        }
        let mut g = Graph::new(n)?;
        let mut idx = 0;
        'outer: for j in 1..n {
            for i in 0..j {
                let byte = bytes[1 + idx / 6] - 63;
                let bit = (byte >> (5 - idx % 6)) & 1;
                if bit == 1 {
                    g.add_edge(i, j)?;
                }
                idx += 1;
                if idx == nbits {
                    break 'outer;
                }
            }
        }
        // padding bits of the last group must be zero
        for pad in nbits..bytes.len().saturating_sub(1) * 6 {
            let byte = bytes[1 + pad / 6] - 63;
            if (byte >> (5 - pad % 6)) & 1 != 0 {
                return Err(GraphError::Graph6 {
                    reason: "nonzero padding bits".into(),
                    offset: base + 1 + pad / 6,
                });
            }
        }
        Ok(g)
    }

    /// Encode as a graph6 line (no trailing newline).
    pub fn encode_graph6(&self) -> String {
        let n = self.n;
        let mut out = vec![63 + n as u8];
        let nbits = n * (n - 1) / 2;
        let mut group = 0u8;
        let mut filled = 0;
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                group <<= 1;
                if self.has_edge(i, j) {
                    group |= 1;
                }
                filled += 1;
                idx += 1;
                if filled == 6 {
                    out.push(group + 63);
                    group = 0;
                    filled = 0;
                }
            }
        }
        debug_assert_eq!(idx, nbits);
        if filled > 0 {
            group <<= 6 - filled;
            out.push(group + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are ASCII")
    }

    // ---- adjacency-list JSON -----------------------------------------

    pub fn parse_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let mut g = Graph::new(file.n)?;
        for [u, v] in file.edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let file = GraphJson {
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&file).expect("graph json serializes")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Human-editable alternative to graph6: `{"n": 8, "edges": [[0,1],...]}`.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Heap's algorithm; calls `visit` on every permutation of `perm`.
fn permute_all(perm: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    let len = perm.len();
    if k == len {
        visit(perm);
        return;
    }
    for i in k..len {
        perm.swap(k, i);
        permute_all(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_node_graphs() {
        let g = Graph::parse_graph6("A?").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 0);

        let k2 = Graph::parse_graph6("A_").unwrap();
        assert_eq!(k2.node_count(), 2);
        assert!(k2.has_edge(0, 1));
    }

    #[test]
    fn parse_dqc() {
        // 5-node graph used by several graph6 references.
        let g = Graph::parse_graph6("DQc").unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edges(), vec![(0, 2), (0, 4), (1, 3), (3, 4)]);
        assert_eq!(g.encode_graph6(), "DQc");
    }

    #[test]
    fn parse_with_header() {
        let g = Graph::parse_graph6(">>graph6<<A_").unwrap();
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn encode_examples() {
        assert_eq!(Graph::new(1).unwrap().encode_graph6(), "@");
        assert_eq!(Graph::from_edges(2, [(0, 1)]).unwrap().encode_graph6(), "A_");
    }

    #[test]
    fn encoded_length_formula() {
        for n in 1..=8 {
            let g = Graph::complete(n).unwrap();
            let expect = 1 + (n * (n - 1) / 2).div_ceil(6);
            assert_eq!(g.encode_graph6().len(), expect);
        }
    }

    #[test]
    fn graph6_error_offsets() {
        let err = Graph::parse_graph6("A").unwrap_err();
        assert!(matches!(err, GraphError::Graph6 { offset: 1, .. }), "{err}");

        let err = Graph::parse_graph6("A_X").unwrap_err();
        assert!(matches!(err, GraphError::Graph6 { offset: 2, .. }), "{err}");

        let err = Graph::parse_graph6("A\n").unwrap_err();
        assert!(matches!(err, GraphError::Graph6 { offset: 1, .. }), "{err}");
    }

    #[test]
    fn universal_nodes_examples() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(k3.universal_nodes(), vec![0, 1, 2]);

        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.universal_nodes(), vec![1]);

        let empty = Graph::new(4).unwrap();
        assert!(empty.universal_nodes().is_empty());
    }

    #[test]
    fn almost_universal_examples() {
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(
            c4.almost_universal_nodes(),
            vec![(0, 2), (1, 3), (2, 0), (3, 1)]
        );

        let k4 = Graph::complete(4).unwrap();
        assert!(k4.almost_universal_nodes().is_empty());

        // star K_{1,3}: center is universal, leaves have degree 1 != n-2
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(star.almost_universal_nodes().is_empty());
    }

    #[test]
    fn remove_node_examples() {
        let k3 = Graph::complete(3).unwrap();
        let k2 = k3.remove_node(0).unwrap();
        assert_eq!(k2.node_count(), 2);
        assert!(k2.has_edge(0, 1));

        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let rest = path.remove_node(1).unwrap();
        assert_eq!(rest.node_count(), 2);
        assert_eq!(rest.edge_count(), 0);
    }

    #[test]
    fn remove_node_relabels_in_order() {
        let g = Graph::from_edges(4, [(0, 3), (1, 3), (2, 3)]).unwrap();
        let h = g.remove_node(1).unwrap();
        assert_eq!(h.edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn canonical_form_identifies_isomorphs() {
        let p3a = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p3b = Graph::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(p3a.canonical_bits(), p3b.canonical_bits());
        assert_ne!(p3a.canonical_bits(), k3.canonical_bits());
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let h = Graph::parse_json(&g.to_json()).unwrap();
        assert_eq!(g, h);
        assert!(Graph::parse_json("{\"n\": 2, \"edges\": [[0,0]]}").is_err());
    }
}

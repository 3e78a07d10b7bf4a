//! Newick serialization with integer branch lengths, plus DOT export.
//!
//! The dialect is deliberately small: leaf names are `[A-Za-z0-9_.-]+`,
//! every non-root node carries `:<integer>` after it, internal nodes are
//! anonymous, and the single exception is a top-level node with exactly one
//! child, which must be named (that is how a tree rooted at a leaf is
//! written, e.g. `(b:5)a;`).

use thiserror::Error;

use crate::tree::{TreeError, WeightedTree};

#[derive(Error, Debug, PartialEq, Eq)]
pub enum NewickError {
    #[error("newick: {reason} at byte offset {offset}")]
    Syntax { reason: String, offset: usize },
    #[error("newick: {0}")]
    Structure(#[from] TreeError),
}

fn name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'-'
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize, u64)>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, reason: impl Into<String>) -> Result<T, NewickError> {
        Err(NewickError::Syntax {
            reason: reason.into(),
            offset: self.pos,
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), NewickError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {:?}", b as char))
        }
    }

    fn alloc(&mut self) -> usize {
        self.labels.push(None);
        self.labels.len() - 1
    }

    fn parse_name(&mut self) -> Result<String, NewickError> {
        let start = self.pos;
        while self.peek().is_some_and(name_byte) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a name");
        }
        Ok(String::from_utf8(self.bytes[start..self.pos].to_vec()).expect("ascii"))
    }

    fn parse_weight(&mut self) -> Result<u64, NewickError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer branch length");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        text.parse::<u64>()
            .map_err(|_| NewickError::Syntax {
                reason: format!("branch length {text:?} does not fit u64"),
                offset: start,
            })
    }

    fn parse_node(&mut self, id: usize) -> Result<(), NewickError> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                let child = self.alloc();
                self.parse_node(child)?;
                self.skip_ws();
                self.eat(b':')?;
                let w = self.parse_weight()?;
                self.edges.push((id, child, w));
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or ')'"),
                }
            }
            self.skip_ws();
            if self.peek().is_some_and(name_byte) {
                let name = self.parse_name()?;
                self.labels[id] = Some(name);
            }
        } else {
            let name = self.parse_name()?;
            self.labels[id] = Some(name);
        }
        Ok(())
    }
}

/// Parse one Newick tree. The top-level node becomes the designated root.
pub fn parse_newick(text: &str) -> Result<WeightedTree, NewickError> {
    if !text.is_ascii() {
        return Err(NewickError::Syntax {
            reason: "input must be ASCII".into(),
            offset: 0,
        });
    }
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        labels: Vec::new(),
        edges: Vec::new(),
    };
    p.skip_ws();
    let root = p.alloc();
    p.parse_node(root)?;
    p.skip_ws();
    p.eat(b';')?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.err("trailing characters after ';'");
    }
    Ok(WeightedTree::with_root(p.labels, p.edges, Some(root))?)
}

/// Serialize a tree to Newick. Starts at the designated root if present,
/// otherwise at the lowest-numbered internal node (or node 0 for a tree with
/// no internal nodes). `parse_newick(to_newick(t))` reproduces `t`'s shape,
/// labels and weights.
pub fn to_newick(t: &WeightedTree) -> String {
    fn enc(t: &WeightedTree, v: usize, parent: usize, out: &mut String) {
        if t.is_leaf(v) {
            out.push_str(t.label(v).expect("leaves are labeled"));
            return;
        }
        out.push('(');
        let mut first = true;
        for &(y, w) in t.neighbors(v) {
            if y == parent {
                continue;
            }
            if !first {
                out.push(',');
            }
            first = false;
            enc(t, y, v, out);
            out.push(':');
            out.push_str(&w.to_string());
        }
        out.push(')');
    }

    if t.node_count() == 1 {
        return format!("{};", t.label(0).expect("single node is a labeled leaf"));
    }
    let start = t
        .root()
        .or_else(|| t.internal_nodes().first().copied())
        .unwrap_or(0);
    let mut out = String::new();
    if t.is_leaf(start) {
        // tree written from a leaf: single branch, then the leaf's own name
        let &(child, w) = &t.neighbors(start)[0];
        out.push('(');
        enc(t, child, start, &mut out);
        out.push(':');
        out.push_str(&w.to_string());
        out.push(')');
        out.push_str(t.label(start).expect("leaves are labeled"));
    } else {
        enc(t, start, start, &mut out);
    }
    out.push(';');
    out
}

/// GraphViz rendering: leaves as labeled boxes, internal nodes as points,
/// edges annotated with their weights.
pub fn to_dot(t: &WeightedTree) -> String {
    let mut out = String::from("graph tree {\n  node [shape=point];\n");
    for v in t.leaves() {
        out.push_str(&format!(
            "  n{v} [shape=box, label=\"{}\"];\n",
            t.label(v).expect("leaves are labeled")
        ));
    }
    for &(u, v, w) in t.edges() {
        out.push_str(&format!("  n{u} -- n{v} [label=\"{w}\"];\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_cherry() {
        let t = parse_newick("(a:1,b:1);").unwrap();
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.leaf_count(), 2);
        assert_eq!(t.leaf_distance_matrix().by_label("a", "b"), Some(2));
    }

    #[test]
    fn parse_nested() {
        let t = parse_newick("((a:2,b:3):1,c:4);").unwrap();
        let dm = t.leaf_distance_matrix();
        assert_eq!(dm.by_label("a", "b"), Some(5));
        assert_eq!(dm.by_label("a", "c"), Some(7));
        assert_eq!(dm.by_label("b", "c"), Some(8));
    }

    #[test]
    fn parse_single_node_and_leaf_rooted() {
        let t = parse_newick("a;").unwrap();
        assert_eq!(t.node_count(), 1);

        let t = parse_newick("(b:5)a;").unwrap();
        assert_eq!(t.node_count(), 2);
        assert_eq!(t.leaf_distance_matrix().by_label("a", "b"), Some(5));
        assert_eq!(t.root(), Some(0));
    }

    #[test]
    fn round_trip_is_identity_on_canonical_text() {
        for s in [
            "(a:1,b:1);",
            "((a:2,b:3):1,c:4);",
            "(b:5)a;",
            "((a:1,b:2):0,(c:3,d:4):7);",
            "a;",
        ] {
            let t = parse_newick(s).unwrap();
            assert_eq!(to_newick(&t), s);
            assert!(parse_newick(&to_newick(&t)).unwrap().structurally_equal(&t));
        }
    }

    #[test]
    fn whitespace_is_tolerated_and_normalized() {
        let t = parse_newick(" ( a:1 , b:2 ) ;\n").unwrap();
        assert_eq!(to_newick(&t), "(a:1,b:2);");
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = parse_newick("(a:1,b:2").unwrap_err();
        assert!(matches!(err, NewickError::Syntax { offset: 8, .. }), "{err}");

        let err = parse_newick("(a:x,b:2);").unwrap_err();
        assert!(matches!(err, NewickError::Syntax { offset: 3, .. }), "{err}");

        let err = parse_newick("(a:1,b:2); extra").unwrap_err();
        assert!(matches!(err, NewickError::Syntax { .. }), "{err}");

        let err = parse_newick("(a:1.5,b:2);").unwrap_err();
        assert!(matches!(err, NewickError::Syntax { .. }), "{err}");
    }

    #[test]
    fn structural_errors_surface() {
        let err = parse_newick("(a:1,a:2);").unwrap_err();
        assert!(
            matches!(err, NewickError::Structure(TreeError::DuplicateLabel(_))),
            "{err}"
        );

        // an inner anonymous node with a single child has degree 2 and no
        // label, which the tree model rejects as an unlabeled leaf only when
        // it ends up with degree <= 1; here it is fine, so this parses
        let t = parse_newick("((a:1):2,b:3);").unwrap();
        assert_eq!(t.leaf_distance_matrix().by_label("a", "b"), Some(6));

        // but a named internal node is rejected
        let err = parse_newick("(a:1,b:2)r;").unwrap_err();
        assert!(
            matches!(err, NewickError::Structure(TreeError::LabeledInternal { .. })),
            "{err}"
        );
    }

    #[test]
    fn dot_output_mentions_every_edge() {
        let t = parse_newick("((a:2,b:3):1,c:4);").unwrap();
        let dot = to_dot(&t);
        assert!(dot.starts_with("graph tree {"));
        assert_eq!(dot.matches(" -- ").count(), t.edge_count());
        assert!(dot.contains("label=\"a\""));
        assert!(dot.contains("label=\"4\""));
    }
}

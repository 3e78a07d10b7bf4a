//! File loading and emission helpers shared by the subcommands.

use std::path::Path;

use anyhow::{Context, Result};
use pcglab_core::{Graph, LeafAssignment, Topology, Witness, parse_newick};

/// Load a graph from a file holding either a graph6 line or a JSON object
/// (`{"n": …, "edges": [[u,v],…]}`), sniffed by the first byte.
pub fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    let trimmed = text.trim();
    let parsed = if trimmed.starts_with('{') {
        Graph::parse_json(trimmed)
    } else {
        Graph::parse_graph6(trimmed.lines().next().unwrap_or(""))
    };
    parsed.with_context(|| format!("parsing graph file {}", path.display()))
}

pub fn load_witness(path: &Path) -> Result<Witness> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading witness file {}", path.display()))?;
    Witness::from_json(&text).with_context(|| format!("parsing witness file {}", path.display()))
}

/// Load a shape from a newick file; weights in the file are ignored and
/// degree-2 nodes are suppressed.
pub fn load_topology(path: &Path) -> Result<Topology> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading topology file {}", path.display()))?;
    let tree = parse_newick(text.trim())
        .with_context(|| format!("parsing topology file {}", path.display()))?;
    Topology::from_tree(&tree)
        .with_context(|| format!("adopting the shape in {}", path.display()))
}

/// Load a node→slot assignment: either a bare JSON array `[s0, s1, …]` or an
/// object `{"slots": [s0, s1, …]}`.
pub fn load_assignment(path: &Path) -> Result<LeafAssignment> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading assignment file {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing assignment file {}", path.display()))?;
    let slots_value = match &value {
        serde_json::Value::Object(map) => map
            .get("slots")
            .with_context(|| format!("{}: missing \"slots\" key", path.display()))?,
        other => other,
    };
    let slots: Vec<usize> = serde_json::from_value(slots_value.clone())
        .with_context(|| format!("{}: slots must be an array of integers", path.display()))?;
    LeafAssignment::new(slots)
        .with_context(|| format!("{}: slots must form a bijection", path.display()))
}

/// Write `text` to `path`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

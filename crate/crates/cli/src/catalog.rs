//! The catalog of eight-node candidate graphs driven by `reproduce`.
//!
//! A catalog directory holds `catalog.json` (ids, file names, notes, and
//! optional structural facts) next to one graph6 file per entry. The graph
//! bytes are not distributed with this repository; a manifest whose graph
//! files are absent loads as [`Catalog::Missing`], which callers report as
//! a skip rather than an error. Facts that are present must hold of the
//! parsed graphs — a manifest that contradicts its own files is an error.

use std::path::Path;

use anyhow::{Context, Result, bail};
use pcglab_core::Graph;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct ManifestFile {
    #[serde(default)]
    schema: Option<u32>,
    entries: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    id: String,
    file: String,
    #[serde(default)]
    note: String,
    #[serde(default)]
    universal_node: Option<usize>,
    #[serde(default)]
    almost_universal_node: Option<usize>,
}

/// One loaded catalog graph with its verified structural facts.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub note: String,
    pub graph6: String,
    pub graph: Graph,
    pub universal_node: Option<usize>,
    /// `(u, v)`: node `u` adjacent to every node except `v`.
    pub almost_universal: Option<(usize, usize)>,
}

#[derive(Debug)]
pub enum Catalog {
    /// Directory, manifest, or graph files not present — report as skipped.
    Missing { reason: String },
    Loaded(Vec<CatalogEntry>),
}

/// Load and validate the catalog under `dir`.
///
/// Missing pieces (directory, manifest, graph files) yield
/// [`Catalog::Missing`]. Present-but-wrong pieces (unparsable manifest or
/// graph, wrong node count, failed structural fact) are hard errors.
pub fn load_catalog(dir: &Path) -> Result<Catalog> {
    if !dir.is_dir() {
        return Ok(Catalog::Missing {
            reason: format!("catalog directory {} not found", dir.display()),
        });
    }
    let manifest_path = dir.join("catalog.json");
    if !manifest_path.is_file() {
        return Ok(Catalog::Missing {
            reason: format!("manifest {} not found", manifest_path.display()),
        });
    }
    let text = std::fs::read_to_string(&manifest_path)
        .with_context(|| format!("reading {}", manifest_path.display()))?;
    let manifest: ManifestFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", manifest_path.display()))?;
    if let Some(schema) = manifest.schema
        && schema != 1
    {
        bail!("{}: unsupported schema {schema}", manifest_path.display());
    }
    if manifest.entries.is_empty() {
        bail!("{}: no entries", manifest_path.display());
    }

    let missing: Vec<String> = manifest
        .entries
        .iter()
        .filter(|e| !dir.join(&e.file).is_file())
        .map(|e| e.file.clone())
        .collect();
    if !missing.is_empty() {
        return Ok(Catalog::Missing {
            reason: format!(
                "graph files not present in {}: {}",
                dir.display(),
                missing.join(", ")
            ),
        });
    }

    let mut entries = Vec::new();
    for entry in &manifest.entries {
        if entries
            .iter()
            .any(|e: &CatalogEntry| e.id == entry.id)
        {
            bail!("duplicate catalog id {}", entry.id);
        }
        let path = dir.join(&entry.file);
        let raw = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let line = raw.trim().lines().next().unwrap_or("");
        let graph = Graph::parse_graph6(line)
            .with_context(|| format!("parsing {}", path.display()))?;
        if graph.node_count() != 8 {
            bail!(
                "{}: expected an 8-node graph, found {} nodes",
                path.display(),
                graph.node_count()
            );
        }
        if let Some(u) = entry.universal_node
            && !graph.universal_nodes().contains(&u)
        {
            bail!(
                "{}: manifest claims node {u} is universal, but it is not",
                entry.id
            );
        }
        let almost_universal = match entry.almost_universal_node {
            None => None,
            Some(u) => {
                let partner = graph
                    .almost_universal_nodes()
                    .into_iter()
                    .find(|&(a, _)| a == u)
                    .map(|(_, v)| v);
                match partner {
                    Some(v) => Some((u, v)),
                    None => bail!(
                        "{}: manifest claims node {u} is almost-universal, but it is not",
                        entry.id
                    ),
                }
            }
        };
        entries.push(CatalogEntry {
            id: entry.id.clone(),
            note: entry.note.clone(),
            graph6: graph.encode_graph6(),
            graph,
            universal_node: entry.universal_node,
            almost_universal,
        });
    }
    Ok(Catalog::Loaded(entries))
}

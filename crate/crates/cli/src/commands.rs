//! One function per subcommand. Every function returns the process exit
//! code: 0 for success/feasible, 1 for a negative or failed outcome within
//! bounds; usage and I/O problems surface as `Err` and exit 2.

use std::path::Path;

use anyhow::{Context, Result, anyhow};
use pcglab_core::{
    Graph, IlpOptions, Route, SearchConfig, SearchOutcome, SearchStats, TopologyChoice, Witness,
    batch_certify, construct_two_interval_witness, enumerate_topologies, export_ilp,
    search_escalating, search_witness, to_dot, to_newick, verify_witness,
};
use serde_json::{Value, json};

use crate::catalog::{Catalog, CatalogEntry, load_catalog};
use crate::config::Settings;
use crate::io::{emit, load_assignment, load_graph, load_topology, load_witness};

fn stats_json(stats: &SearchStats) -> Value {
    json!({
        "topologies": stats.topologies,
        "assignments": stats.assignments,
        "weight_vectors": stats.weight_vectors,
        "nodes_visited": stats.nodes_visited,
        "prunes_conflict": stats.prunes_conflict,
        "prunes_runs": stats.prunes_runs,
        "budget_hit": stats.budget_hit,
    })
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json renders"));
}

// ---- verify ---------------------------------------------------------------

pub fn cmd_verify(graph_path: &Path, witness_path: &Path) -> Result<i32> {
    let graph = load_graph(graph_path)?;
    let witness = load_witness(witness_path)?;
    let report = verify_witness(&graph, &witness)
        .with_context(|| format!("witness {} is malformed", witness_path.display()))?;
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "u": v.u,
                "v": v.v,
                "distance": v.distance,
                "adjacent": v.adjacent,
            })
        })
        .collect();
    print_json(&json!({
        "schema": 1,
        "command": "verify",
        "graph": graph.encode_graph6(),
        "intervals": witness.intervals.intervals().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        "pass": report.pass,
        "violations": violations,
    }));
    Ok(if report.pass { 0 } else { 1 })
}

// ---- search ---------------------------------------------------------------

pub struct SearchArgs<'a> {
    pub graph: &'a Path,
    pub k: usize,
    pub topology: TopologyChoice,
    /// `true` when `--max-weight` was given explicitly: search once at that
    /// bound instead of escalating up to it.
    pub fixed_bound: bool,
    pub node_budget: Option<u64>,
    pub time_budget_ms: Option<u64>,
    pub out: Option<&'a Path>,
}

fn build_config(k: usize, topology: TopologyChoice, s: &Settings, args_node_budget: Option<u64>, time_budget_ms: Option<u64>) -> SearchConfig {
    let mut cfg = SearchConfig::new(k, s.max_weight);
    cfg.min_weight = s.min_weight;
    cfg.topologies = topology;
    cfg.workers = s.workers;
    cfg.deterministic = s.deterministic;
    cfg.node_budget = args_node_budget.filter(|&n| n > 0);
    cfg.time_budget = time_budget_ms
        .filter(|&ms| ms > 0)
        .map(std::time::Duration::from_millis);
    cfg
}

/// Run either a single bounded search or the doubling escalation schedule.
fn run_search(g: &Graph, cfg: &SearchConfig, fixed_bound: bool) -> Result<(SearchOutcome, u64, bool)> {
    if fixed_bound {
        let outcome = search_witness(g, cfg)?;
        Ok((outcome, cfg.max_weight, false))
    } else {
        let (outcome, bound) = search_escalating(g, cfg)?;
        Ok((outcome, bound, true))
    }
}

pub fn cmd_search(args: &SearchArgs<'_>, settings: &Settings) -> Result<i32> {
    let graph = load_graph(args.graph)?;
    let cfg = build_config(args.k, args.topology, settings, args.node_budget, args.time_budget_ms);
    let (outcome, bound, escalated) = run_search(&graph, &cfg, args.fixed_bound)?;

    if let (Some(w), Some(path)) = (&outcome.witness, args.out) {
        std::fs::write(path, w.to_json())
            .with_context(|| format!("writing witness to {}", path.display()))?;
    }
    print_json(&json!({
        "schema": 1,
        "command": "search",
        "graph": graph.encode_graph6(),
        "n": graph.node_count(),
        "k": args.k,
        "bounds": {
            "min_weight": cfg.min_weight,
            "max_weight": cfg.max_weight,
            "escalated": escalated,
            "final_bound": bound,
        },
        "feasible": outcome.witness.is_some(),
        "exhausted": outcome.exhausted,
        "stats": stats_json(&outcome.stats),
        "witness": outcome.witness.as_ref().map(Witness::to_json_value),
    }));
    Ok(if outcome.witness.is_some() { 0 } else { 1 })
}

// ---- construct ------------------------------------------------------------

pub struct ConstructArgs<'a> {
    pub graph: &'a Path,
    pub via: Option<&'a str>,
    pub node: Option<usize>,
    pub partner: Option<usize>,
    pub base_witness: Option<&'a Path>,
    pub out: Option<&'a Path>,
    pub trace: bool,
}

fn resolve_route(g: &Graph, via: Option<&str>, node: Option<usize>, partner: Option<usize>) -> Result<Option<Route>, String> {
    match via {
        None => match node {
            // bare --node: prefer a universal reading, then almost-universal
            Some(u) if g.universal_nodes().contains(&u) => Ok(Some(Route::Universal { u })),
            Some(u) => match partner.or_else(|| {
                g.almost_universal_nodes()
                    .into_iter()
                    .find(|&(a, _)| a == u)
                    .map(|(_, v)| v)
            }) {
                Some(v) => Ok(Some(Route::AlmostUniversal { u, v })),
                None => Err(format!("node {u} is neither universal nor almost-universal")),
            },
            None => Ok(None),
        },
        Some("universal") => {
            let u = match node {
                Some(u) => u,
                None => *g
                    .universal_nodes()
                    .first()
                    .ok_or("graph has no universal node")?,
            };
            Ok(Some(Route::Universal { u }))
        }
        Some("almost-universal") => {
            let (u, v) = match (node, partner) {
                (Some(u), Some(v)) => (u, v),
                (Some(u), None) => g
                    .almost_universal_nodes()
                    .into_iter()
                    .find(|&(a, _)| a == u)
                    .ok_or(format!("node {u} is not almost-universal"))?,
                (None, _) => *g
                    .almost_universal_nodes()
                    .first()
                    .ok_or("graph has no almost-universal pair")?,
            };
            Ok(Some(Route::AlmostUniversal { u, v }))
        }
        Some(other) => Err(format!("unknown route {other:?}")),
    }
}

fn route_json(route: Route) -> Value {
    match route {
        Route::Universal { u } => json!({"kind": "universal", "u": u}),
        Route::AlmostUniversal { u, v } => json!({"kind": "almost-universal", "u": u, "v": v}),
    }
}

pub fn cmd_construct(args: &ConstructArgs<'_>, settings: &Settings) -> Result<i32> {
    let graph = load_graph(args.graph)?;
    let base = args.base_witness.map(load_witness).transpose()?;
    let route = match resolve_route(&graph, args.via, args.node, args.partner) {
        Ok(r) => r,
        Err(message) => {
            print_json(&json!({
                "schema": 1,
                "command": "construct",
                "graph": graph.encode_graph6(),
                "constructed": false,
                "error": message,
            }));
            return Ok(1);
        }
    };
    let cfg = build_config(2, TopologyChoice::All, settings, None, None);
    match construct_two_interval_witness(&graph, route, base.as_ref(), &cfg) {
        Ok(trace) => {
            if let Some(path) = args.out {
                std::fs::write(path, trace.witness.to_json())
                    .with_context(|| format!("writing witness to {}", path.display()))?;
            }
            let mut body = json!({
                "schema": 1,
                "command": "construct",
                "graph": graph.encode_graph6(),
                "constructed": true,
                "route": route_json(trace.route),
                "p": trace.p,
                "c": trace.c,
                "attach_node": trace.attach_node,
                "witness": trace.witness.to_json_value(),
            });
            if args.trace {
                let stages: Vec<Value> = trace
                    .stages
                    .iter()
                    .map(|(name, tree)| json!({"name": name, "tree": to_newick(tree)}))
                    .collect();
                body["stages"] = Value::Array(stages);
                body["base"] = trace
                    .base
                    .as_ref()
                    .map(Witness::to_json_value)
                    .unwrap_or(Value::Null);
            }
            print_json(&body);
            Ok(0)
        }
        Err(e) => {
            print_json(&json!({
                "schema": 1,
                "command": "construct",
                "graph": graph.encode_graph6(),
                "constructed": false,
                "error": e.to_string(),
            }));
            Ok(1)
        }
    }
}

// ---- export-ilp -----------------------------------------------------------

pub struct ExportIlpArgs<'a> {
    pub graph: &'a Path,
    pub topology_file: Option<&'a Path>,
    pub topology: Option<&'a str>,
    pub assignment: Option<&'a Path>,
    pub k: usize,
    pub out: Option<&'a Path>,
}

pub fn cmd_export_ilp(args: &ExportIlpArgs<'_>, settings: &Settings) -> Result<i32> {
    let graph = load_graph(args.graph)?;
    let n = graph.node_count();
    let topo = match (args.topology_file, args.topology) {
        (Some(_), Some(_)) => {
            return Err(anyhow!("--topology-file and --topology are mutually exclusive"));
        }
        (Some(path), None) => load_topology(path)?,
        (None, Some("caterpillar")) | (None, None) => pcglab_core::caterpillar_topology(n)
            .map_err(|e| anyhow!("caterpillar shape for {n} leaves: {e}"))?,
        (None, Some("complete")) => pcglab_core::complete_binary_topology(n)
            .map_err(|e| anyhow!("complete binary shape for {n} leaves: {e}"))?,
        (None, Some(other)) => return Err(anyhow!("unknown topology {other:?}")),
    };
    let assignment = args.assignment.map(load_assignment).transpose()?;
    let mut opts = IlpOptions::new(args.k, settings.max_weight);
    opts.min_weight = settings.min_weight;
    let model = export_ilp(&graph, &topo, assignment.as_ref(), &opts)
        .context("building the integer model")?;
    emit(args.out, &model)?;
    if let Some(path) = args.out {
        print_json(&json!({
            "schema": 1,
            "command": "export-ilp",
            "graph": graph.encode_graph6(),
            "k": args.k,
            "assignment": if assignment.is_some() { "fixed" } else { "free" },
            "out": path.display().to_string(),
            "bytes": model.len(),
        }));
    }
    Ok(0)
}

// ---- enum-topologies ------------------------------------------------------

pub fn cmd_enum_topologies(n: usize, format: &str) -> Result<i32> {
    let topologies = enumerate_topologies(n).map_err(|e| anyhow!("{e}"))?;
    match format {
        "newick" => {
            for topo in &topologies {
                println!("{}", to_newick(topo.tree()));
            }
        }
        "dot" => {
            for topo in &topologies {
                println!("{}", to_dot(topo.tree()));
            }
        }
        "json" => {
            let entries: Vec<Value> = topologies
                .iter()
                .map(|t| {
                    json!({
                        "newick": to_newick(t.tree()),
                        "leaves": t.leaf_count(),
                        "automorphism_order": t.automorphism_order(),
                    })
                })
                .collect();
            print_json(&json!({
                "schema": 1,
                "command": "enum-topologies",
                "n": n,
                "count": entries.len(),
                "topologies": entries,
            }));
        }
        other => return Err(anyhow!("unknown format {other:?}")),
    }
    Ok(0)
}

// ---- batch ----------------------------------------------------------------

pub struct BatchArgs<'a> {
    pub graphs: &'a Path,
    pub k: usize,
    pub topology: TopologyChoice,
    pub fixed_bound: bool,
    pub node_budget: Option<u64>,
    pub time_budget_ms: Option<u64>,
    pub out: Option<&'a Path>,
}

pub fn cmd_batch(args: &BatchArgs<'_>, settings: &Settings) -> Result<i32> {
    let text = std::fs::read_to_string(args.graphs)
        .with_context(|| format!("reading graph list {}", args.graphs.display()))?;
    let cfg = build_config(args.k, args.topology, settings, args.node_budget, args.time_budget_ms);

    struct Line {
        index: usize,
        raw: String,
        graph: Result<Graph, String>,
    }
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(index, l)| {
            let raw = l.trim().to_string();
            let graph = Graph::parse_graph6(&raw).map_err(|e| e.to_string());
            Line { index, raw, graph }
        })
        .collect();

    // with a fixed bound the whole list goes through the batch driver;
    // otherwise each graph escalates independently
    let mut fixed_results: std::collections::BTreeMap<usize, Result<SearchOutcome, String>> =
        Default::default();
    if args.fixed_bound {
        let good: Vec<(usize, Graph)> = lines
            .iter()
            .filter_map(|l| l.graph.as_ref().ok().map(|g| (l.index, g.clone())))
            .collect();
        let graphs: Vec<Graph> = good.iter().map(|(_, g)| g.clone()).collect();
        for ((index, _), result) in good.iter().zip(batch_certify(&graphs, &cfg)) {
            fixed_results.insert(*index, result.map_err(|e| e.to_string()));
        }
    }

    let mut rendered = Vec::new();
    let mut feasible = 0usize;
    let mut failed = 0usize;
    for line in &lines {
        let value = match &line.graph {
            Err(e) => {
                failed += 1;
                json!({
                    "schema": 1,
                    "index": line.index,
                    "input": line.raw,
                    "error": e,
                })
            }
            Ok(graph) => {
                let outcome = if args.fixed_bound {
                    fixed_results
                        .remove(&line.index)
                        .expect("every parsed line was certified")
                        .map(|o| (o, cfg.max_weight))
                } else {
                    search_escalating(graph, &cfg)
                        .map_err(|e| e.to_string())
                };
                match outcome {
                    Err(e) => {
                        failed += 1;
                        json!({
                            "schema": 1,
                            "index": line.index,
                            "graph": graph.encode_graph6(),
                            "error": e,
                        })
                    }
                    Ok((outcome, bound)) => {
                        if outcome.witness.is_some() {
                            feasible += 1;
                        } else {
                            failed += 1;
                        }
                        json!({
                            "schema": 1,
                            "index": line.index,
                            "graph": graph.encode_graph6(),
                            "n": graph.node_count(),
                            "k": args.k,
                            "feasible": outcome.witness.is_some(),
                            "exhausted": outcome.exhausted,
                            "final_bound": bound,
                            "stats": stats_json(&outcome.stats),
                            "witness": outcome.witness.as_ref().map(Witness::to_json_value),
                        })
                    }
                }
            }
        };
        rendered.push(serde_json::to_string(&value).expect("json renders"));
    }

    match args.out {
        Some(path) => {
            let mut body = rendered.join("\n");
            if !body.is_empty() {
                body.push('\n');
            }
            std::fs::write(path, body)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            for line in &rendered {
                println!("{line}");
            }
        }
    }
    eprintln!(
        "batch: {feasible} feasible, {failed} not, of {} graphs",
        lines.len()
    );
    Ok(if failed == 0 { 0 } else { 1 })
}

// ---- reproduce ------------------------------------------------------------

pub struct ReproduceArgs {
    pub node_budget: Option<u64>,
    pub time_budget_ms: Option<u64>,
}

fn family_report(
    g: &Graph,
    choice: TopologyChoice,
    settings: &Settings,
    args: &ReproduceArgs,
) -> Result<(Value, bool)> {
    let cfg = build_config(2, choice, settings, args.node_budget, args.time_budget_ms);
    let (outcome, bound) = search_escalating(g, &cfg)?;
    let verified = match &outcome.witness {
        Some(w) => verify_witness(g, w)?.pass,
        None => false,
    };
    let ok = outcome.witness.is_some() && verified;
    let report = json!({
        "found": outcome.witness.is_some(),
        "verified": verified,
        "exhausted": outcome.exhausted,
        "budget_hit": outcome.stats.budget_hit,
        "final_bound": bound,
        "witness": outcome.witness.as_ref().map(Witness::to_json_value),
    });
    Ok((report, ok))
}

fn construction_report(entry: &CatalogEntry, settings: &Settings) -> Option<(Value, bool)> {
    let (route, label) = if let Some(u) = entry.universal_node {
        (Route::Universal { u }, format!("universal node {u}"))
    } else if let Some((u, v)) = entry.almost_universal {
        (
            Route::AlmostUniversal { u, v },
            format!("almost-universal node {u} (non-neighbor {v})"),
        )
    } else {
        return None;
    };
    let cfg = build_config(2, TopologyChoice::All, settings, None, None);
    let result = construct_two_interval_witness(&entry.graph, Some(route), None, &cfg);
    Some(match result {
        Ok(trace) => (
            json!({
                "route": label,
                "verified": true,
                "intervals": trace.witness.intervals.len(),
                "witness": trace.witness.to_json_value(),
            }),
            true,
        ),
        Err(e) => (
            json!({
                "route": label,
                "verified": false,
                "error": e.to_string(),
            }),
            false,
        ),
    })
}

pub fn cmd_reproduce(args: &ReproduceArgs, settings: &Settings) -> Result<i32> {
    let catalog = load_catalog(&settings.data_dir)?;
    let entries = match catalog {
        Catalog::Missing { reason } => {
            eprintln!("reproduce: skipped: {reason}");
            print_json(&json!({
                "schema": 1,
                "command": "reproduce",
                "status": "skipped",
                "reason": reason,
            }));
            return Ok(0);
        }
        Catalog::Loaded(entries) => entries,
    };

    let mut rows = Vec::new();
    let mut all_ok = true;
    eprintln!(
        "{:<4} {:<14} {:<16} construction",
        "id", "caterpillar", "complete-binary"
    );
    for entry in &entries {
        let (cat, cat_ok) =
            family_report(&entry.graph, TopologyChoice::Caterpillar, settings, args)?;
        let (cb, cb_ok) =
            family_report(&entry.graph, TopologyChoice::CompleteBinary, settings, args)?;
        let construction = construction_report(entry, settings);
        let (construction_json, construction_ok) = match construction {
            Some((value, ok)) => (value, ok),
            None => (Value::Null, true),
        };
        let ok = cat_ok && cb_ok && construction_ok;
        all_ok &= ok;

        let describe = |v: &Value, ok: bool| -> String {
            if ok {
                format!("ok (W={})", v["final_bound"])
            } else if v["budget_hit"].as_bool() == Some(true) {
                "budget".to_string()
            } else {
                "not found".to_string()
            }
        };
        let construction_text = if construction_json.is_null() {
            "—".to_string()
        } else if construction_ok {
            construction_json["route"].as_str().unwrap_or("?").to_string()
        } else {
            format!(
                "failed: {}",
                construction_json["error"].as_str().unwrap_or("?")
            )
        };
        eprintln!(
            "{:<4} {:<14} {:<16} {}",
            entry.id,
            describe(&cat, cat_ok),
            describe(&cb, cb_ok),
            construction_text
        );

        rows.push(json!({
            "id": entry.id,
            "graph": entry.graph6,
            "note": entry.note,
            "ok": ok,
            "families": {
                "caterpillar": cat,
                "complete-binary": cb,
            },
            "construction": construction_json,
        }));
    }

    print_json(&json!({
        "schema": 1,
        "command": "reproduce",
        "status": if all_ok { "ok" } else { "incomplete" },
        "rows": rows,
    }));
    Ok(if all_ok { 0 } else { 1 })
}

//! Exhaustive, pruned search for witnesses over enumerated shapes, bounded
//! integer weights, and a fixed interval budget.
//!
//! The search space for a graph on `n` nodes is the cross product of
//! (shape, leaf assignment, weight vector). Shapes come from the full binary
//! enumeration; assignments are reduced to one representative per orbit of
//! the shape's automorphism group (the action is free, so this divides the
//! assignment count by exactly the group order); weight vectors range over
//! `[min_weight, max_weight]` per edge and are enumerated by depth-first
//! search in lexicographic order.
//!
//! Three facts make the search fast and keep it sound:
//!
//! * edges are visited in an order that completes leaf pairs early, so most
//!   pair distances are known near the top of the DFS;
//! * a partial weight vector is abandoned when two already-complete pairs
//!   realize the same distance with opposite adjacency (no interval family
//!   of any size can fix that), and when the completed pairs alone already
//!   need more than `k` interval runs — adding further pairs can only
//!   preserve or increase the run count, never lower it;
//! * every returned witness is re-verified against the graph before it
//!   leaves this module.
//!
//! "Not found with the space exhausted" is a statement about the bounded
//! space only — it is never a proof that the graph is outside the class.

use std::collections::BTreeMap;
use std::sync::Mutex;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::Graph;
use crate::topology::{
    LeafAssignment, Topology, TopologyError, assignments_mod_automorphism, caterpillar_topology,
    complete_binary_topology, enumerate_topologies,
};
use crate::tree::{TreeError, WeightedTree};
use crate::witness::{IntervalSet, Witness, WitnessError, minimal_runs, verify_witness};

#[derive(Error, Debug)]
pub enum SolverError {
    #[error("no tree shapes available for {0}-node graphs")]
    UnsupportedNodeCount(usize),
    #[error("topology set is empty")]
    EmptyTopologySet,
    #[error("topology has {got} leaf slots but the graph has {expected} nodes")]
    LeafMismatch { expected: usize, got: usize },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("internal error: search produced a witness that fails verification")]
    BadWitness,
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// Which family of shapes to search over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TopologyChoice {
    /// Every full binary shape for the node count (supported up to 10).
    #[default]
    All,
    Caterpillar,
    CompleteBinary,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum number of intervals a witness may use.
    pub k: usize,
    /// Smallest edge weight tried (0 is legal but off by default; zero-weight
    /// leaf edges collapse leaves onto internal nodes).
    pub min_weight: u64,
    /// Largest edge weight tried. Escalating drivers treat this as a cap.
    pub max_weight: u64,
    pub topologies: TopologyChoice,
    pub workers: usize,
    /// When set, the returned witness is the one the purely sequential
    /// search would find first, independent of worker count.
    pub deterministic: bool,
    /// Abort after visiting this many DFS nodes (shared across workers).
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl SearchConfig {
    pub fn new(k: usize, max_weight: u64) -> Self {
        SearchConfig {
            k,
            min_weight: 1,
            max_weight,
            topologies: TopologyChoice::All,
            workers: 1,
            deterministic: true,
            node_budget: None,
            time_budget: None,
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        if self.k == 0 {
            return Err(SolverError::InvalidConfig("interval budget k must be ≥ 1".into()));
        }
        if self.min_weight > self.max_weight {
            return Err(SolverError::InvalidConfig(format!(
                "min_weight {} exceeds max_weight {}",
                self.min_weight, self.max_weight
            )));
        }
        if self.workers == 0 {
            return Err(SolverError::InvalidConfig("worker count must be ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub topologies: u64,
    /// (shape, assignment) units whose weight search was entered.
    pub assignments: u64,
    /// Complete weight vectors reached by the DFS.
    pub weight_vectors: u64,
    /// All DFS nodes visited (partial vectors included).
    pub nodes_visited: u64,
    pub prunes_conflict: u64,
    pub prunes_runs: u64,
    /// True when a node or time budget stopped the search early.
    pub budget_hit: bool,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.topologies += other.topologies;
        self.assignments += other.assignments;
        self.weight_vectors += other.weight_vectors;
        self.nodes_visited += other.nodes_visited;
        self.prunes_conflict += other.prunes_conflict;
        self.prunes_runs += other.prunes_runs;
        self.budget_hit |= other.budget_hit;
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    /// True only when the entire bounded space was covered; finding a
    /// witness stops early, and budget aborts leave the space uncovered, so
    /// `exhausted && witness.is_none()` is the only certified negative — and
    /// it certifies nothing beyond these bounds.
    pub exhausted: bool,
    pub stats: SearchStats,
}

/// Pick the shape list implied by the node count and filter.
fn resolve_topologies(n: usize, choice: TopologyChoice) -> Result<Vec<Topology>, SolverError> {
    if n == 2 {
        // every filter degenerates to the single-edge shape
        return Ok(vec![caterpillar_topology(2)?]);
    }
    match choice {
        TopologyChoice::All => {
            if !(3..=10).contains(&n) {
                return Err(SolverError::UnsupportedNodeCount(n));
            }
            Ok(enumerate_topologies(n)?)
        }
        TopologyChoice::Caterpillar => Ok(vec![caterpillar_topology(n)?]),
        TopologyChoice::CompleteBinary => Ok(vec![complete_binary_topology(n)?]),
    }
}

/// Decide bounded membership for `g`: search for a witness with at most
/// `cfg.k` intervals over the configured shapes and weight range.
pub fn search_witness(g: &Graph, cfg: &SearchConfig) -> Result<SearchOutcome, SolverError> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 1 {
        // a single node has no pairs; the one-leaf tree with no intervals
        // is its (vacuous) witness
        let tree = WeightedTree::new(vec![Some("L0".into())], vec![])?;
        let witness = Witness {
            tree,
            assignment: [(0, "L0".to_string())].into_iter().collect(),
            intervals: IntervalSet::empty(),
        };
        if !verify_witness(g, &witness)?.pass {
            return Err(SolverError::BadWitness);
        }
        return Ok(SearchOutcome {
            witness: Some(witness),
            exhausted: true,
            stats: SearchStats::default(),
        });
    }
    let topologies = resolve_topologies(n, cfg.topologies)?;
    search_witness_on(g, &topologies, cfg)
}

/// Like [`search_witness`] but over an explicit shape list.
pub fn search_witness_on(
    g: &Graph,
    topologies: &[Topology],
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SolverError> {
    cfg.validate()?;
    if topologies.is_empty() {
        return Err(SolverError::EmptyTopologySet);
    }
    let n = g.node_count();
    for t in topologies {
        if t.leaf_count() != n {
            return Err(SolverError::LeafMismatch {
                expected: n,
                got: t.leaf_count(),
            });
        }
    }

    let prepared: Vec<Prepared> = topologies.iter().map(Prepared::new).collect();
    // parallel unit = (shape, assignment representative)
    let mut units: Vec<(usize, LeafAssignment)> = Vec::new();
    for (ti, topo) in topologies.iter().enumerate() {
        for sigma in assignments_mod_automorphism(topo, n) {
            units.push((ti, sigma));
        }
    }

    let shared = Shared {
        next_unit: AtomicU64::new(0),
        min_found: AtomicU64::new(u64::MAX),
        stop: AtomicBool::new(false),
        nodes_used: AtomicU64::new(0),
        best: Mutex::new(None),
        deadline: cfg.time_budget.map(|d| Instant::now() + d),
    };

    let workers = cfg.workers.min(units.len()).max(1);
    let mut stats = SearchStats {
        topologies: topologies.len() as u64,
        ..SearchStats::default()
    };
    let mut failed = false;
    if workers == 1 {
        let (local, ok) = run_worker(g, topologies, &prepared, &units, cfg, &shared);
        stats.merge(&local);
        failed |= !ok;
    } else {
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    scope.spawn(|| run_worker(g, topologies, &prepared, &units, cfg, &shared))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect::<Vec<_>>()
        });
        for (local, ok) in results {
            stats.merge(&local);
            failed |= !ok;
        }
    }
    if failed {
        return Err(SolverError::BadWitness);
    }

    let witness = shared
        .best
        .lock()
        .expect("witness slot poisoned")
        .take()
        .map(|(_, w)| w);
    let all_units_done =
        shared.next_unit.load(Ordering::SeqCst) >= units.len() as u64 && witness.is_none();
    Ok(SearchOutcome {
        exhausted: all_units_done && !stats.budget_hit,
        witness,
        stats,
    })
}

/// Search with the weight bound escalating from `max(min_weight, n−1)` and
/// doubling up to `cfg.max_weight`, which acts as the cap. Returns the last
/// outcome (with statistics accumulated across steps) and the bound it ran
/// at.
pub fn search_escalating(g: &Graph, cfg: &SearchConfig) -> Result<(SearchOutcome, u64), SolverError> {
    cfg.validate()?;
    let n = g.node_count() as u64;
    let mut bound = cfg
        .min_weight
        .max(n.saturating_sub(1))
        .max(1)
        .min(cfg.max_weight);
    let mut accumulated = SearchStats::default();
    loop {
        let mut step = cfg.clone();
        step.max_weight = bound;
        let mut outcome = search_witness(g, &step)?;
        accumulated.merge(&outcome.stats);
        outcome.stats = accumulated;
        if outcome.witness.is_some() || outcome.stats.budget_hit || bound >= cfg.max_weight {
            return Ok((outcome, bound));
        }
        bound = bound.saturating_mul(2).min(cfg.max_weight);
    }
}

/// Run [`search_witness`] over each graph, never letting one failure abort
/// the rest.
pub fn batch_certify(
    graphs: &[Graph],
    cfg: &SearchConfig,
) -> Vec<Result<SearchOutcome, SolverError>> {
    graphs.iter().map(|g| search_witness(g, cfg)).collect()
}

// ---- internals -------------------------------------------------------

struct Shared {
    next_unit: AtomicU64,
    /// Lowest unit index where a witness was found so far.
    min_found: AtomicU64,
    /// Cooperative abort: budget exhausted, or (non-deterministic mode) a
    /// witness was found somewhere.
    stop: AtomicBool,
    nodes_used: AtomicU64,
    best: Mutex<Option<(u64, Witness)>>,
    deadline: Option<Instant>,
}

/// One leaf pair of a shape: its slot ids and the set of DFS depths whose
/// edges lie on the slot-to-slot path.
struct PairSpec {
    s: usize,
    t: usize,
    mask: u32,
}

/// A shape preprocessed for incremental distance completion.
struct Prepared {
    /// `edge_order[depth]` = index into the shape tree's edge list.
    edge_order: Vec<usize>,
    /// `schedule[depth]` = pairs whose distance completes once the edge at
    /// `depth` is assigned.
    schedule: Vec<Vec<PairSpec>>,
}

impl Prepared {
    fn new(topo: &Topology) -> Prepared {
        let tree = topo.tree();
        let n = topo.leaf_count();
        let e = tree.edge_count();
        // edge index lookup by endpoints
        let mut edge_idx: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, &(u, v, _)) in tree.edges().iter().enumerate() {
            edge_idx.insert((u.min(v), u.max(v)), i);
        }
        // root at slot 0's leaf; record parent node and parent edge index
        let root = topo.leaf_node(0);
        let mut parent = vec![usize::MAX; tree.node_count()];
        let mut parent_edge = vec![usize::MAX; tree.node_count()];
        let mut order_of_visit = Vec::new();
        let mut stack = vec![root];
        let mut seen = vec![false; tree.node_count()];
        seen[root] = true;
        while let Some(x) = stack.pop() {
            order_of_visit.push(x);
            for &(y, _) in tree.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    parent_edge[y] = edge_idx[&(x.min(y), x.max(y))];
                    stack.push(y);
                }
            }
        }
        // path to root as an edge set, per node
        let mut depth_in_tree = vec![0usize; tree.node_count()];
        for &x in &order_of_visit {
            if x != root {
                depth_in_tree[x] = depth_in_tree[parent[x]] + 1;
            }
        }
        let path_to_root = |mut x: usize| -> Vec<usize> {
            let mut edges = Vec::new();
            while x != root {
                edges.push(parent_edge[x]);
                x = parent[x];
            }
            edges.reverse(); // root-to-node order
            edges
        };
        // visit leaves in slot order, appending each one's uncovered edges;
        // pairs then complete as early as possible
        let mut covered = vec![false; e];
        let mut edge_order = Vec::with_capacity(e);
        for slot in 1..n {
            for idx in path_to_root(topo.leaf_node(slot)) {
                if !covered[idx] {
                    covered[idx] = true;
                    edge_order.push(idx);
                }
            }
        }
        debug_assert_eq!(edge_order.len(), e);
        let depth_of: BTreeMap<usize, usize> =
            edge_order.iter().enumerate().map(|(d, &i)| (i, d)).collect();
        // per-pair path mask over depths = symmetric difference of the two
        // root paths
        let mut schedule: Vec<Vec<PairSpec>> = (0..e).map(|_| Vec::new()).collect();
        for s in 0..n {
            for t in s + 1..n {
                let mut on_path = vec![false; e];
                for idx in path_to_root(topo.leaf_node(s)) {
                    on_path[idx] = !on_path[idx];
                }
                for idx in path_to_root(topo.leaf_node(t)) {
                    on_path[idx] = !on_path[idx];
                }
                let mut mask = 0u32;
                let mut last = 0usize;
                for (idx, &on) in on_path.iter().enumerate() {
                    if on {
                        let d = depth_of[&idx];
                        mask |= 1 << d;
                        last = last.max(d);
                    }
                }
                debug_assert!(mask != 0);
                schedule[last].push(PairSpec { s, t, mask });
            }
        }
        Prepared {
            edge_order,
            schedule,
        }
    }
}

fn run_worker(
    g: &Graph,
    topologies: &[Topology],
    prepared: &[Prepared],
    units: &[(usize, LeafAssignment)],
    cfg: &SearchConfig,
    shared: &Shared,
) -> (SearchStats, bool) {
    let mut stats = SearchStats::default();
    let mut ok = true;
    // budget checkpoint counter; persists across units so that many small
    // units still reach checkpoints
    let mut local_nodes: u64 = 0;
    loop {
        let unit = shared.next_unit.fetch_add(1, Ordering::SeqCst);
        if unit >= units.len() as u64 {
            break;
        }
        if shared.stop.load(Ordering::SeqCst) {
            break;
        }
        if unit > shared.min_found.load(Ordering::SeqCst) {
            // a strictly earlier unit already holds a witness; later units
            // can never displace it
            break;
        }
        let (ti, sigma) = &units[unit as usize];
        stats.assignments += 1;
        let mut dfs = Dfs {
            g,
            topo: &topologies[*ti],
            prep: &prepared[*ti],
            cfg,
            shared,
            unit,
            node_of_slot: invert(sigma),
            sigma,
            weights: vec![0; prepared[*ti].edge_order.len()],
            values: BTreeMap::new(),
            stats: SearchStats::default(),
            local_nodes: &mut local_nodes,
            aborted: false,
        };
        match dfs.run() {
            Ok(Some((found_unit, witness))) => {
                let mut best = shared.best.lock().expect("witness slot poisoned");
                if best.as_ref().map_or(true, |(u, _)| found_unit < *u) {
                    shared.min_found.fetch_min(found_unit, Ordering::SeqCst);
                    *best = Some((found_unit, witness));
                }
                if !cfg.deterministic {
                    shared.stop.store(true, Ordering::SeqCst);
                }
            }
            Ok(None) => {}
            Err(_) => ok = false,
        }
        stats.merge(&dfs.stats);
    }
    (stats, ok)
}

fn invert(sigma: &LeafAssignment) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for node in 0..sigma.len() {
        inv[sigma.slot_of(node)] = node;
    }
    inv
}

struct Dfs<'a> {
    g: &'a Graph,
    topo: &'a Topology,
    prep: &'a Prepared,
    cfg: &'a SearchConfig,
    shared: &'a Shared,
    unit: u64,
    node_of_slot: Vec<usize>,
    sigma: &'a LeafAssignment,
    weights: Vec<u64>,
    values: BTreeMap<u64, (u32, u32)>,
    stats: SearchStats,
    local_nodes: &'a mut u64,
    aborted: bool,
}

impl Dfs<'_> {
    fn run(&mut self) -> Result<Option<(u64, Witness)>, SolverError> {
        self.descend(0)
    }

    /// Periodic budget/abort bookkeeping; true means "abandon this unit".
    fn should_abort(&mut self) -> bool {
        *self.local_nodes += 1;
        if *self.local_nodes % 1024 != 0 {
            return self.aborted;
        }
        let total = self.shared.nodes_used.fetch_add(1024, Ordering::SeqCst) + 1024;
        if let Some(limit) = self.cfg.node_budget {
            if total > limit {
                self.shared.stop.store(true, Ordering::SeqCst);
                self.stats.budget_hit = true;
            }
        }
        if let Some(deadline) = self.shared.deadline {
            if Instant::now() >= deadline {
                self.shared.stop.store(true, Ordering::SeqCst);
                self.stats.budget_hit = true;
            }
        }
        if self.shared.stop.load(Ordering::SeqCst) {
            self.aborted = true;
        }
        // in deterministic mode a unit below the best-so-far must still be
        // finished; a unit above it can never win
        if self.unit > self.shared.min_found.load(Ordering::SeqCst) {
            self.aborted = true;
        }
        self.aborted
    }

    fn descend(&mut self, depth: usize) -> Result<Option<(u64, Witness)>, SolverError> {
        if depth == self.prep.edge_order.len() {
            self.stats.weight_vectors += 1;
            return self.emit();
        }
        for w in self.cfg.min_weight..=self.cfg.max_weight {
            self.stats.nodes_visited += 1;
            if self.should_abort() {
                return Ok(None);
            }
            self.weights[depth] = w;
            let completed = self.complete_pairs(depth);
            match completed {
                Completion::Conflict { inserted } => {
                    self.stats.prunes_conflict += 1;
                    self.retract(depth, inserted);
                    continue;
                }
                Completion::TooManyRuns => {
                    self.stats.prunes_runs += 1;
                    self.retract(depth, self.prep.schedule[depth].len());
                    continue;
                }
                Completion::Open => {}
            }
            let found = self.descend(depth + 1)?;
            self.retract(depth, self.prep.schedule[depth].len());
            if found.is_some() {
                return Ok(found);
            }
            if self.aborted {
                return Ok(None);
            }
        }
        Ok(None)
    }

    /// Insert the distances of pairs completing at `depth` into the value
    /// map and run the two prune checks.
    fn complete_pairs(&mut self, depth: usize) -> Completion {
        let pairs = &self.prep.schedule[depth];
        for (i, pair) in pairs.iter().enumerate() {
            let dist = self.pair_distance(pair);
            let adjacent = self
                .g
                .has_edge(self.node_of_slot[pair.s], self.node_of_slot[pair.t]);
            let entry = self.values.entry(dist).or_insert((0, 0));
            if adjacent {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
            if entry.0 > 0 && entry.1 > 0 {
                return Completion::Conflict { inserted: i + 1 };
            }
        }
        if !pairs.is_empty() && self.run_count_exceeds_budget() {
            return Completion::TooManyRuns;
        }
        Completion::Open
    }

    /// Count edge-value runs among completed pairs, stopping early once the
    /// budget is exceeded. Completed pairs form a subset of the final pair
    /// set, and runs never merge as values are added, so exceeding `k` here
    /// is final.
    fn run_count_exceeds_budget(&self) -> bool {
        let mut runs = 0usize;
        let mut separated = true;
        for (&_v, &(edges, nonedges)) in &self.values {
            if edges > 0 {
                if separated {
                    runs += 1;
                    if runs > self.cfg.k {
                        return true;
                    }
                    separated = false;
                }
            } else if nonedges > 0 {
                separated = true;
            }
        }
        false
    }

    fn pair_distance(&self, pair: &PairSpec) -> u64 {
        let mut mask = pair.mask;
        let mut dist = 0;
        while mask != 0 {
            let d = mask.trailing_zeros() as usize;
            dist += self.weights[d];
            mask &= mask - 1;
        }
        dist
    }

    /// Undo the first `inserted` pair insertions of `depth`.
    fn retract(&mut self, depth: usize, inserted: usize) {
        for pair in &self.prep.schedule[depth][..inserted] {
            let dist = self.pair_distance(pair);
            let adjacent = self
                .g
                .has_edge(self.node_of_slot[pair.s], self.node_of_slot[pair.t]);
            let entry = self.values.get_mut(&dist).expect("value was inserted");
            if adjacent {
                entry.0 -= 1;
            } else {
                entry.1 -= 1;
            }
            if *entry == (0, 0) {
                self.values.remove(&dist);
            }
        }
    }

    /// All pairs complete and the prunes passed: build, verify and return
    /// the witness.
    fn emit(&mut self) -> Result<Option<(u64, Witness)>, SolverError> {
        let runs = minimal_runs(&self.values).expect("conflicts were pruned");
        debug_assert!(runs.len() <= self.cfg.k);
        let intervals = IntervalSet::new(runs).expect("runs are sorted and separated");
        let mut original = vec![0u64; self.weights.len()];
        for (depth, &idx) in self.prep.edge_order.iter().enumerate() {
            original[idx] = self.weights[depth];
        }
        let tree = self.topo.tree().with_weights(&original)?;
        let assignment: BTreeMap<usize, String> = (0..self.g.node_count())
            .map(|node| {
                let leaf = self.topo.leaf_node(self.sigma.slot_of(node));
                (
                    node,
                    tree.label(leaf).expect("slots are labeled").to_string(),
                )
            })
            .collect();
        let witness = Witness {
            tree,
            assignment,
            intervals,
        };
        if !verify_witness(self.g, &witness)?.pass {
            return Err(SolverError::BadWitness);
        }
        Ok(Some((self.unit, witness)))
    }
}

enum Completion {
    /// A distance is now realized by both an edge and a non-edge; `inserted`
    /// entries must be retracted.
    Conflict { inserted: usize },
    TooManyRuns,
    Open,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(g: &Graph, cfg: &SearchConfig) -> SearchOutcome {
        search_witness(g, cfg).unwrap()
    }

    #[test]
    fn single_node_graph_gets_a_vacuous_witness() {
        let g = Graph::new(1).unwrap();
        let out = outcome(&g, &SearchConfig::new(1, 3));
        let w = out.witness.unwrap();
        assert!(out.exhausted);
        assert!(w.intervals.is_empty());
        assert!(verify_witness(&g, &w).unwrap().pass);
    }

    #[test]
    fn two_node_graphs() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let out = outcome(&k2, &SearchConfig::new(1, 3));
        let w = out.witness.unwrap();
        assert_eq!(w.intervals.intervals(), &[(1, 1)]);

        let e2 = Graph::new(2).unwrap();
        let w = outcome(&e2, &SearchConfig::new(1, 3)).witness.unwrap();
        assert!(w.intervals.is_empty());
    }

    #[test]
    fn triangle_on_caterpillar_filter() {
        let k3 = Graph::complete(3).unwrap();
        let mut cfg = SearchConfig::new(1, 2);
        cfg.topologies = TopologyChoice::Caterpillar;
        let out = outcome(&k3, &cfg);
        let w = out.witness.unwrap();
        assert!(verify_witness(&k3, &w).unwrap().pass);
        // all unit weights: every distance is 2, one interval
        assert_eq!(w.intervals.intervals(), &[(2, 2)]);
    }

    #[test]
    fn path_on_three_nodes_is_infeasible_at_weight_one() {
        // all three distances on the 3-star are 2; the non-edge collides
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let out = outcome(&p3, &SearchConfig::new(1, 1));
        assert!(out.witness.is_none());
        assert!(out.exhausted);
        assert!(out.stats.prunes_conflict > 0);

        // weight 2 suffices
        let out = outcome(&p3, &SearchConfig::new(1, 2));
        assert!(out.witness.is_some());
    }

    #[test]
    fn four_cycle_is_found() {
        let c4 = Graph::cycle(4).unwrap();
        let out = outcome(&c4, &SearchConfig::new(1, 8));
        let w = out.witness.unwrap();
        assert!(verify_witness(&c4, &w).unwrap().pass);
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let c4 = Graph::cycle(4).unwrap();
        let mut cfg = SearchConfig::new(1, 4);
        let serial = outcome(&c4, &cfg).witness.unwrap().to_json();
        cfg.workers = 4;
        let parallel = outcome(&c4, &cfg).witness.unwrap().to_json();
        assert_eq!(serial, parallel);

        // twice with the same config: byte-identical
        let again = outcome(&c4, &cfg).witness.unwrap().to_json();
        assert_eq!(parallel, again);
    }

    #[test]
    fn node_budget_aborts_without_claiming_exhaustion() {
        // At unit weights every 5-leaf shape realizes distance values with
        // pair counts {2: 2, 3: 4, 4: 4}; no sub-multiset sums to the five
        // edges of the 5-cycle, so this search can never find a witness.
        // Duplicating the shape makes the space large enough that the DFS
        // must pass a budget checkpoint before covering it.
        let c5 = Graph::cycle(5).unwrap();
        let shapes: Vec<_> = (0..200)
            .map(|_| caterpillar_topology(5).unwrap())
            .collect();
        let mut cfg = SearchConfig::new(1, 1);
        cfg.node_budget = Some(1); // absurdly small
        let out = search_witness_on(&c5, &shapes, &cfg).unwrap();
        assert!(out.witness.is_none());
        assert!(!out.exhausted);
        assert!(out.stats.budget_hit);
    }

    #[test]
    fn escalation_raises_the_bound_until_found() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut cfg = SearchConfig::new(1, 16); // cap
        cfg.min_weight = 1;
        let (out, bound) = search_escalating(&p3, &cfg).unwrap();
        assert!(out.witness.is_some());
        assert_eq!(bound, 2); // starts at n−1 = 2 and immediately succeeds
    }

    #[test]
    fn batch_reports_per_graph() {
        let graphs = vec![
            Graph::complete(3).unwrap(),
            Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap(),
        ];
        let results = batch_certify(&graphs, &SearchConfig::new(1, 2));
        assert_eq!(results.len(), 2);
        assert!(results.iter().all(|r| r.as_ref().unwrap().witness.is_some()));
    }

    #[test]
    fn rejects_bad_configs_and_mismatched_shapes() {
        let g = Graph::complete(3).unwrap();
        let mut cfg = SearchConfig::new(0, 3);
        assert!(matches!(
            search_witness(&g, &cfg),
            Err(SolverError::InvalidConfig(_))
        ));
        cfg = SearchConfig::new(1, 3);
        cfg.min_weight = 5;
        assert!(matches!(
            search_witness(&g, &cfg),
            Err(SolverError::InvalidConfig(_))
        ));

        let quartet = caterpillar_topology(4).unwrap();
        assert!(matches!(
            search_witness_on(&g, &[quartet], &SearchConfig::new(1, 3)),
            Err(SolverError::LeafMismatch { .. })
        ));
        assert!(matches!(
            search_witness_on(&g, &[], &SearchConfig::new(1, 3)),
            Err(SolverError::EmptyTopologySet)
        ));
    }

    #[test]
    fn stats_count_real_work() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let out = outcome(&p3, &SearchConfig::new(1, 2));
        assert_eq!(out.stats.topologies, 1);
        assert!(out.stats.assignments >= 1);
        assert!(out.stats.nodes_visited > 0);
    }
}

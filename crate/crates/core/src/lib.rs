//! Decide, verify and construct multi-interval pairwise compatibility graph
//! (PCG) witnesses for small graphs.
//!
//! A graph `G` is a *k-interval PCG* if there is an edge-weighted tree `T`, a
//! bijection from the nodes of `G` to the leaves of `T`, and `k` disjoint
//! closed intervals such that two nodes of `G` are adjacent exactly when the
//! tree distance between their leaves lies in one of the intervals. The triple
//! (tree, assignment, intervals) is a [`Witness`]; everything in this crate
//! produces, checks or transforms witnesses.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`] — graphs on at most 16 nodes, graph6 and JSON codecs;
//! * [`tree`] — edge-weighted trees, leaf distance matrices, binarization;
//! * [`newick`] — Newick and DOT text forms for weighted trees;
//! * [`topology`] — unrooted full binary tree shapes, their automorphisms,
//!   and leaf assignments modulo symmetry;
//! * [`witness`] — interval sets, witness verification, and tightest interval
//!   extraction for a fixed tree and assignment;
//! * [`construct`] — lifting a witness of `G - u` to a two-interval witness
//!   of `G` when `u` is universal or almost universal;
//! * [`solver`] — exhaustive weighted search for witnesses over enumerated
//!   topologies, plus ILP model export for external solvers.

pub mod construct;
pub mod graph;
pub mod ilp;
pub mod newick;
pub mod solver;
pub mod topology;
pub mod tree;
pub mod witness;

pub use construct::{
    ConstructError, ConstructionTrace, Route, almost_universal_extension,
    construct_two_interval_witness, normalize_base_witness, universal_extension,
};
pub use graph::{Graph, GraphError, MAX_NODES};
pub use ilp::{IlpError, IlpOptions, export_ilp};
pub use newick::{NewickError, parse_newick, to_dot, to_newick};
pub use solver::{
    SearchConfig, SearchOutcome, SearchStats, SolverError, TopologyChoice, batch_certify,
    search_escalating, search_witness, search_witness_on,
};
pub use topology::{
    LeafAssignment, Topology, TopologyError, assignments_mod_automorphism, caterpillar_topology,
    complete_binary_topology, enumerate_topologies,
};
pub use tree::{DistanceMatrix, TreeError, WeightedTree};
pub use witness::{
    IntervalSet, VerifyReport, Violation, Witness, WitnessError, extract_intervals, verify_witness,
};

//! `pcglab` — decide, verify, and construct multi-interval
//! pairwise-compatibility witnesses for small graphs.
//!
//! Exit codes: 0 = success / feasible / verified; 1 = negative outcome
//! within the given bounds (witness rejected, nothing found, construction
//! impossible); 2 = usage, I/O, or input-format error.

mod catalog;
mod commands;
mod config;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pcglab_core::TopologyChoice;

use crate::config::{Overrides, Settings};

#[derive(Parser)]
#[command(
    name = "pcglab",
    version,
    about = "Interval certificates for pairwise compatibility graphs",
    after_help = "Settings resolve in order: defaults, pcglab.toml, PCGLAB_* \
                  environment variables, flags. Machine output is JSON on \
                  stdout; diagnostics go to stderr."
)]
struct Cli {
    /// Config file to read instead of ./pcglab.toml.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TopologyFlag {
    All,
    Caterpillar,
    Complete,
}

impl From<TopologyFlag> for TopologyChoice {
    fn from(f: TopologyFlag) -> Self {
        match f {
            TopologyFlag::All => TopologyChoice::All,
            TopologyFlag::Caterpillar => TopologyChoice::Caterpillar,
            TopologyFlag::Complete => TopologyChoice::CompleteBinary,
        }
    }
}

/// Flags shared by the searching commands.
#[derive(Args)]
struct SearchTuning {
    /// Weight bound; when omitted, the bound starts at n-1 and doubles up
    /// to the configured cap.
    #[arg(long, value_name = "W")]
    max_weight: Option<u64>,

    /// Smallest edge weight tried (0 permits zero-weight edges).
    #[arg(long, value_name = "M")]
    min_weight: Option<u64>,

    /// Worker threads for the search.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,

    /// Deterministic result selection (default): the same witness is
    /// returned for every worker count.
    #[arg(long, overrides_with = "racy")]
    deterministic: bool,

    /// First-found result selection: faster, but the witness may vary
    /// between runs.
    #[arg(long, overrides_with = "deterministic")]
    racy: bool,

    /// Abort after visiting this many search nodes (0 = unlimited).
    #[arg(long, value_name = "N")]
    node_budget: Option<u64>,

    /// Abort after this many milliseconds (0 = unlimited).
    #[arg(long, value_name = "MS")]
    time_budget_ms: Option<u64>,
}

impl SearchTuning {
    fn overrides(&self) -> Overrides<'_> {
        Overrides {
            max_weight: self.max_weight,
            min_weight: self.min_weight,
            workers: self.workers,
            deterministic: match (self.deterministic, self.racy) {
                (_, true) => Some(false),
                (true, false) => Some(true),
                (false, false) => None,
            },
            data_dir: None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a witness file against a graph.
    Verify {
        /// Graph file (graph6 line or JSON object).
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Witness file (JSON).
        #[arg(long, value_name = "FILE")]
        witness: PathBuf,
    },

    /// Search for a witness over bounded integer weights.
    Search {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Number of intervals allowed.
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// Shape family to search.
        #[arg(long, value_enum, default_value_t = TopologyFlag::All)]
        topology: TopologyFlag,
        #[command(flatten)]
        tuning: SearchTuning,
        /// Also write the witness JSON to this file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Build a two-interval witness around a universal or almost-universal
    /// node.
    Construct {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Route: universal | almost-universal (default: auto-pick).
        #[arg(long, value_name = "ROUTE")]
        via: Option<String>,
        /// The special node to build around.
        #[arg(long, value_name = "U")]
        node: Option<usize>,
        /// The non-neighbor for the almost-universal route.
        #[arg(long, value_name = "V")]
        partner: Option<usize>,
        /// Base witness for the graph minus the special node (default:
        /// search for one).
        #[arg(long, value_name = "FILE")]
        base_witness: Option<PathBuf>,
        #[command(flatten)]
        tuning: SearchTuning,
        /// Include the stage-by-stage trees and the base witness in the
        /// output.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Write the integer feasibility model for external solvers.
    ExportIlp {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Shape from a newick file (weights ignored).
        #[arg(long, value_name = "FILE")]
        topology_file: Option<PathBuf>,
        /// Named shape family: caterpillar | complete (default caterpillar).
        #[arg(long, value_name = "NAME")]
        topology: Option<String>,
        /// Fix the node→slot assignment from a JSON file; omitted = free.
        #[arg(long, value_name = "FILE")]
        assignment: Option<PathBuf>,
        #[arg(short, long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_name = "W")]
        max_weight: Option<u64>,
        #[arg(long, value_name = "M")]
        min_weight: Option<u64>,
        /// Model file to write (default: stdout).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// List the binary shapes for n leaves.
    EnumTopologies {
        #[arg(short = 'n', long = "n", value_name = "N")]
        n: usize,
        /// newick | dot | json
        #[arg(long, default_value = "newick")]
        format: String,
    },

    /// Certify every graph in a file of graph6 lines; JSON line per graph.
    Batch {
        /// Input file: one graph6 string per line; # starts a comment.
        #[arg(long, value_name = "FILE")]
        graphs: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = TopologyFlag::All)]
        topology: TopologyFlag,
        #[command(flatten)]
        tuning: SearchTuning,
        /// Write the JSON lines here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Run the eight-node campaign from the bundled catalog: witnesses on
    /// the caterpillar and complete-binary families for every entry, plus
    /// the construction routes recorded in the manifest.
    Reproduce {
        /// Catalog directory (default: data/nonpcg8).
        #[arg(long, value_name = "DIR")]
        data_dir: Option<PathBuf>,
        #[command(flatten)]
        tuning: SearchTuning,
    },
}

fn run(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Verify { graph, witness } => commands::cmd_verify(graph, witness),

        Command::Search {
            graph,
            k,
            topology,
            tuning,
            out,
        } => {
            let settings = settings_with(&cli, tuning.overrides())?;
            commands::cmd_search(
                &commands::SearchArgs {
                    graph,
                    k: *k,
                    topology: (*topology).into(),
                    fixed_bound: tuning.max_weight.is_some(),
                    node_budget: tuning.node_budget,
                    time_budget_ms: tuning.time_budget_ms,
                    out: out.as_deref(),
                },
                &settings,
            )
        }

        Command::Construct {
            graph,
            via,
            node,
            partner,
            base_witness,
            tuning,
            trace,
            out,
        } => {
            let settings = settings_with(&cli, tuning.overrides())?;
            commands::cmd_construct(
                &commands::ConstructArgs {
                    graph,
                    via: via.as_deref(),
                    node: *node,
                    partner: *partner,
                    base_witness: base_witness.as_deref(),
                    out: out.as_deref(),
                    trace: *trace,
                },
                &settings,
            )
        }

        Command::ExportIlp {
            graph,
            topology_file,
            topology,
            assignment,
            k,
            max_weight,
            min_weight,
            out,
        } => {
            let overrides = Overrides {
                max_weight: *max_weight,
                min_weight: *min_weight,
                ..Default::default()
            };
            let settings = settings_with(&cli, overrides)?;
            commands::cmd_export_ilp(
                &commands::ExportIlpArgs {
                    graph,
                    topology_file: topology_file.as_deref(),
                    topology: topology.as_deref(),
                    assignment: assignment.as_deref(),
                    k: *k,
                    out: out.as_deref(),
                },
                &settings,
            )
        }

        Command::EnumTopologies { n, format } => commands::cmd_enum_topologies(*n, format),

        Command::Batch {
            graphs,
            k,
            topology,
            tuning,
            out,
        } => {
            let settings = settings_with(&cli, tuning.overrides())?;
            commands::cmd_batch(
                &commands::BatchArgs {
                    graphs,
                    k: *k,
                    topology: (*topology).into(),
                    fixed_bound: tuning.max_weight.is_some(),
                    node_budget: tuning.node_budget,
                    time_budget_ms: tuning.time_budget_ms,
                    out: out.as_deref(),
                },
                &settings,
            )
        }

        Command::Reproduce { data_dir, tuning } => {
            let mut overrides = tuning.overrides();
            overrides.data_dir = data_dir.as_deref();
            let settings = settings_with(&cli, overrides)?;
            commands::cmd_reproduce(
                &commands::ReproduceArgs {
                    // bounded by default so an under-provisioned weight cap
                    // reports budget_hit instead of running unchecked;
                    // --node-budget 0 removes the bound
                    node_budget: tuning.node_budget.or(Some(20_000_000)),
                    time_budget_ms: tuning.time_budget_ms,
                },
                &settings,
            )
        }
    }
}

fn settings_with(cli: &Cli, overrides: Overrides<'_>) -> Result<Settings> {
    config::resolve(cli.config.as_deref(), overrides)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("pcglab: error: {e:#}");
            ExitCode::from(2)
        }
    }
}

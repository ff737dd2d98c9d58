use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "twofactor", version, about = "2-factor parity classification for cubic graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify graph6 graphs as 2-factor Hamiltonian / 2-factor isomorphic / pseudo 2-factor isomorphic.
    Classify(ClassifyArgs),
    /// Structural properties: girth, connectivity, automorphisms.
    Props(PropsArgs),
    /// Generate connected cubic bipartite graphs of girth at least 6.
    Gen(GenArgs),
    /// Enumerate regular lifts of a base graph.
    Lift(LiftArgs),
    /// Print a built-in graph.
    Named(NamedArgs),
    /// List all perfect matchings of each input graph.
    Matchings(MatchingsArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// graph6 files, one graph per line; `-` or nothing reads standard input.
    pub inputs: Vec<PathBuf>,
    /// Treat malformed or unsuitable graphs as fatal (exit 3) instead of skipping them.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    /// Skip graphs with smaller girth.
    #[arg(long)]
    pub min_girth: Option<usize>,
    /// Skip graphs that are not bipartite.
    #[arg(long)]
    pub require_bipartite: bool,
    /// Skip graphs with a nontrivial 3-edge-cut.
    #[arg(long)]
    pub require_e4ec: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Graph6,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Heuristic,
    Hybrid,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_enum, default_value = "hybrid")]
    pub mode: ModeArg,
    /// Worker threads per graph (default: available parallelism).
    #[arg(long, env = "TWOFACTOR_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock limit per graph.
    #[arg(long)]
    pub max_seconds: Option<f64>,
    /// Cap on matchings examined per worker and graph.
    #[arg(long)]
    pub max_matchings: Option<u64>,
    /// Enumerate every 2-factor even after a parity witness is found.
    #[arg(long)]
    pub full: bool,
    /// Write every perfect matching of each graph to this file (forces a full exhaustive run).
    #[arg(long)]
    pub dump_matchings: Option<PathBuf>,
    /// Add elapsed time to JSON reports.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug)]
pub struct PropsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Number of vertices (even).
    pub n: usize,
    /// Print only the number of graphs.
    #[arg(long)]
    pub count_only: bool,
    #[arg(long, env = "TWOFACTOR_WORKERS")]
    pub workers: Option<usize>,
    /// Write graph6 here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Report progress on standard error.
    #[arg(long)]
    pub progress: bool,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    /// `theta`, a built-in graph name, or `g6:<graph6>`.
    #[arg(long)]
    pub base: String,
    /// Group: `Z7`, `Z3^2`, `NA27`, `HEIS27`, or products like `Z3xZ5`.
    #[arg(long)]
    pub group: String,
    #[arg(long, default_value_t = 3)]
    pub min_girth: usize,
    /// Also emit disconnected lifts.
    #[arg(long)]
    pub allow_disconnected: bool,
    #[arg(long, value_enum, default_value = "graph6")]
    pub format: Format,
    #[arg(long, env = "TWOFACTOR_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct NamedArgs {
    /// Graph name; omit with --list.
    pub name: Option<String>,
    #[arg(long)]
    pub list: bool,
    #[arg(long, value_enum, default_value = "graph6")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct MatchingsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Append the 2-factor type to each line.
    #[arg(long)]
    pub types: bool,
    /// Print only the number of perfect matchings per graph.
    #[arg(long)]
    pub count_only: bool,
}

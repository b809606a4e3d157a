mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::Failure;

/// Finite Euclidean and non-Euclidean graphs: construction, spectral
/// certification, combinatorial checks and distance-set experiments.
#[derive(Debug, Parser)]
#[command(name = "fqgraph", version)]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarise GF(p^r) or GF(q).
    Field(FieldArgs),
    /// A catalogued quadratic form with its Gram matrix and sphere sizes.
    Form(FormArgs),
    /// Build one graph and optionally certify its eigenvalue bound.
    Graph(GraphArgs),
    /// Triangle-free Ramsey witness from the planar Euclidean graph.
    Ramsey(RamseyArgs),
    /// Distance-set experiments and exhaustive tables.
    Distance(DistanceArgs),
    /// Run the acceptance criteria.
    Suite(SuiteArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FieldArgs {
    #[arg(long, conflicts_with = "q", requires = "r")]
    pub p: Option<u64>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct FormArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Euclidean,
    Halfplane,
    Orthogonal,
    Bch,
    Alon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    Json,
    Adjacency,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub q: Option<u64>,
    /// Dimension of a Euclidean graph.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Quadratic form name, e.g. plus_even.
    #[arg(long)]
    pub kind: Option<String>,
    /// Distance value, as a field element index.
    #[arg(long)]
    pub a: Option<u32>,
    /// Half-plane non-square; defaults to the primitive element.
    #[arg(long)]
    pub sigma: Option<u32>,
    /// Orthogonal family: odd_theta, odd_omega, even_plus or even_minus.
    #[arg(long)]
    pub ortho: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Orthogonal relation index, 1 to (q+1)/2.
    #[arg(long)]
    pub i: Option<u32>,
    /// Code length parameter of the binary code graphs.
    #[arg(long)]
    pub k: Option<u32>,
    /// Require a certificate and fail when the stated bound is missed.
    #[arg(long)]
    pub certify: bool,
    #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
    pub format: GraphFormat,
}

#[derive(Debug, Args, Serialize)]
pub struct RamseyArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long)]
    pub exact_alpha: bool,
    #[arg(long)]
    pub exact_chi: bool,
    #[arg(long, default_value_t = 100_000_000)]
    pub node_limit: u64,
    /// Wall-clock limit per search, in seconds.
    #[arg(long, default_value_t = 300)]
    pub time_limit: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceArg {
    Euclidean,
    Halfplane,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct DistanceArgs {
    /// JSON experiment configuration.
    #[arg(long, conflicts_with = "space")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub space: Option<SpaceArg>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value = "plus_even")]
    pub kind: String,
    #[arg(long)]
    pub sigma: Option<u32>,
    /// Enumerate every subset up to --max-size.
    #[arg(long, requires = "space")]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    /// Comma-separated subset sizes for a sampled experiment.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// uniform, adversarial-line or adversarial-ball.
    #[arg(long, default_value = "uniform")]
    pub mode: String,
    /// Use the two-set theorems.
    #[arg(long)]
    pub pair: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteFormat {
    Text,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct SuiteArgs {
    /// List the criteria and exit.
    #[arg(long)]
    pub list: bool,
    /// Comma-separated criterion numbers.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = SuiteFormat::Text)]
    pub format: SuiteFormat,
    /// Flip one adjacency bit in each audited graph.
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

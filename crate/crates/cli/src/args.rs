use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deg2_core::algorithms::AlgorithmId;
use serde::Serialize;

/// Online matching with degree-2 arrivals: generators, algorithms, oracles, certificates.
#[derive(Debug, Parser, Serialize)]
#[command(name = "deg2", version)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write output to this file instead of stdout. Relative paths resolve against
    /// the output directory when one is set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Default output directory.
    #[arg(long, env = "DEG2_OUT_DIR", global = true)]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Generate an instance file.
    #[command(subcommand)]
    Gen(GenKind),
    /// Run an algorithm and estimate its competitive ratio.
    Run(RunArgs),
    /// Check a certificate; exits with status 1 when an assertion fails.
    #[command(subcommand)]
    Certify(CertifyKind),
    /// Print the constant eta, optionally with the alpha table.
    Eta(EtaArgs),
    /// Print the offline optimum and a witness matching.
    Oracle(InstanceArg),
    /// Print the exact expected Half-Half matching size.
    Exact(ExactArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    /// The phased family with 2^k offline vertices.
    Phase {
        /// Number of phases; the graph has 2^k offline vertices.
        #[arg(long)]
        k: u32,
    },
    /// A random instance with degree-1 and degree-2 arrivals.
    Random {
        /// Number of offline vertices.
        #[arg(long)]
        offline: usize,
        /// Number of arrivals.
        #[arg(long)]
        arrivals: usize,
        /// Probability that an arrival has two neighbors.
        #[arg(long, default_value_t = 0.5)]
        p2: f64,
        /// Generator seed.
        #[arg(long)]
        seed: u64,
    },
    /// The exact-degree-2 reduction with m copies and one shared dummy vertex.
    Reduce {
        /// Source instance file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of copies.
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgoArg {
    HalfHalf,
    WaterLevel,
    Greedy,
}

impl From<AlgoArg> for AlgorithmId {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::HalfHalf => AlgorithmId::HalfHalf,
            AlgoArg::WaterLevel => AlgorithmId::WaterLevel,
            AlgoArg::Greedy => AlgorithmId::Greedy,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    /// Algorithm to run.
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    /// Instance file.
    #[arg(long, required_unless_present = "dist", conflicts_with = "dist")]
    pub instance: Option<PathBuf>,
    /// Distribution spec: {"kind": "fixed" | "permuted", "instance": <object or path>}.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Number of Monte Carlo trials.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Master seed; required with --format json, otherwise 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Relabel the offline side uniformly at random in every trial.
    #[arg(long, conflicts_with = "dist")]
    pub permute: bool,
    /// Worker threads for the trials; the output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifyKind {
    /// Primal-dual certificate of one Half-Half run against eta.
    Integral(InstanceArg),
    /// Primal-dual certificate of Water-Level against 3/4.
    Fractional(InstanceArg),
    /// Re-derive the hand tables for levels 1..7.
    Tables,
    /// Check the two margin claims with certified tails.
    Claims {
        /// Largest m for the first claim.
        #[arg(long, default_value_t = 20)]
        max_m: u32,
        /// Largest m1 for the second claim (pairs m2 < m1).
        #[arg(long, default_value_t = 12)]
        max_m2: u32,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct InstanceArg {
    /// Instance file.
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct EtaArgs {
    /// Series terms to sum.
    #[arg(long, default_value_t = 8)]
    pub terms: u32,
    /// Decimal digits to print (truncated).
    #[arg(long, default_value_t = 15)]
    pub digits: usize,
    /// Also print alpha_(1..=max-k).
    #[arg(long)]
    pub table: bool,
    /// Largest k in the alpha table.
    #[arg(long, default_value_t = 15)]
    pub max_k: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ExactArgs {
    /// Instance file.
    #[arg(long)]
    pub instance: PathBuf,
    /// Also evaluate the exact-degree-2 reduction with this many copies.
    #[arg(long)]
    pub copies: Option<usize>,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use walsh_hardy::random::DEFAULT_SEED;
use walsh_hardy::suites::{DEFAULT_MAX_N, DEFAULT_SUITE_RESOLUTION};

/// Numerical verification harness for Walsh–Paley kernels, dyadic Hardy
/// spaces and the associated growth experiments.
#[derive(Debug, Parser)]
#[command(name = "walsh-verify", version, about, long_about = None)]
pub struct Cli {
    /// Seed for every randomized check
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads; more than one also runs suites concurrently
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    /// Output format (text applies to suite reports; tables fall back to csv)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump a kernel on the cells of G_N, or bound reports per index
    Kernel(KernelArgs),
    /// Lebesgue constants and their Cesàro averages
    Lebesgue(LebesgueArgs),
    /// Run a named verification suite, or `all`
    Verify(VerifyArgs),
    /// Run a growth or convergence experiment
    Experiment(Box<ExperimentArgs>),
    /// Re-emit a saved JSON report in another format
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Dirichlet,
    Fejer,
    /// L1 norm, variation bounds and majorant ratio per index
    Report,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(value_enum)]
    pub kind: KernelKind,

    /// Kernel index
    #[arg(long)]
    pub n: Option<u64>,

    /// Largest index for `report` (all of 1..=n-max)
    #[arg(long)]
    pub n_max: Option<u64>,

    #[arg(long, default_value_t = DEFAULT_SUITE_RESOLUTION)]
    pub resolution: u32,

    /// Construction route: direct, lemma1 or recursive (default) for
    /// Dirichlet; direct, weighted or lemma3 (default) for Fejér
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct LebesgueArgs {
    /// A single index: print L(n), V(n) and the cell-sum value
    #[arg(long, conflicts_with = "n_max")]
    pub n: Option<u64>,

    /// Upper end of the Cesàro grid
    #[arg(long, default_value_t = 1 << 20)]
    pub n_max: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name or `all`
    pub suite: String,

    #[arg(long, default_value_t = DEFAULT_SUITE_RESOLUTION)]
    pub resolution: u32,

    /// Upper end of the Lebesgue-constant sweep
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub max_n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Divergence,
    UpperBound,
    NormConvergence,
    StrongSum,
    BlockStrong,
    A02Blocks,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub kind: ExperimentKind,

    /// JSON document of parameters; flags given alongside override it
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub p: Option<f64>,

    /// pow2, pow2_plus1, pow2_plus_half or alternating
    #[arg(long)]
    pub family: Option<String>,

    /// Family the atoms are drawn from (divergence only)
    #[arg(long)]
    pub build_family: Option<String>,

    /// thm411b, thm412b, thm422b, thm423b, thm511b, thm512b, thm521b, thm522b or thm531b
    #[arg(long)]
    pub schedule: Option<String>,

    /// const, power:<beta> or logpow:<gamma>
    #[arg(long)]
    pub phi: Option<String>,

    /// partial_sum or fejer
    #[arg(long)]
    pub operator: Option<String>,

    /// weak_lp, lp or hp
    #[arg(long)]
    pub norm: Option<String>,

    #[arg(long)]
    pub resolution: Option<u32>,

    #[arg(long)]
    pub k_min: Option<u32>,

    /// Random atoms and random functions per sample set
    #[arg(long)]
    pub samples: Option<usize>,

    #[arg(long)]
    pub n_max: Option<u64>,

    /// Largest block level for block-strong
    #[arg(long)]
    pub m_max: Option<u32>,

    /// Strong-sum source: constant, atom or build
    #[arg(long)]
    pub source: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON file written by a previous run with `--format json`
    pub input: PathBuf,
}

use std::path::PathBuf;

use bernbound::verify::DEFAULT_PRECISION_BITS;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "bernbound", version)]
#[command(about = "Exact binomial deviation probabilities, tail bounds and their certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; tables default to CSV, verification to JSON.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Relative precision of the exp enclosures used by verify.
    #[arg(long, global = true, env = "BERNBOUND_PRECISION_BITS", default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one bound family at (n, eps).
    Bound(BoundArgs),
    /// Exact (or log-domain) deviation probability of a binomial mean.
    Tail(TailArgs),
    /// Centre mass and group masses of a grid.
    Decompose(DecomposeArgs),
    /// Deviation probabilities and bounds for n = 33, m = 15.
    Table1(TableArgs),
    /// Continuous correction factors over the reference (n, eps) grid.
    Table2(TableArgs),
    /// Point lists for the bound comparison plots.
    FigureData(FigureArgs),
    /// Certify the inequalities over parameter grids.
    Verify(VerifyArgs),
    /// Smallest n or eps that brings a bound under a target.
    Samplesize(SampleSizeArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct BoundArgs {
    /// hoeffding, uspensky, bernoulli-sharp, general-discrete, continuous,
    /// one-sided, normalized or classical-bernoulli.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: u64,
    /// Deviation as a decimal or `a/b`; read as t for the normalized family.
    #[arg(long)]
    pub eps: String,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub digits: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct TailArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub eps: String,
    /// two, upper or lower.
    #[arg(long, default_value = "two")]
    pub side: String,
    /// strict (`>`) or weak (`>=`).
    #[arg(long, default_value = "strict")]
    pub boundary: String,
    #[arg(long, default_value_t = 6)]
    pub digits: usize,
    /// Largest n evaluated with exact rationals.
    #[arg(long, default_value_t = 500)]
    pub exact_threshold: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct DecomposeArgs {
    /// Group width.
    #[arg(long)]
    pub k: u64,
    #[arg(long, requires = "s", conflicts_with_all = ["n", "m"])]
    pub r: Option<u64>,
    #[arg(long, requires = "r")]
    pub s: Option<u64>,
    #[arg(long, requires = "m")]
    pub n: Option<u64>,
    #[arg(long, requires = "n")]
    pub m: Option<u64>,
    #[arg(long, default_value_t = 6)]
    pub digits: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct TableArgs {
    /// Add exact rational columns.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Panel {
    /// Central-mass base p^p (1+p)^(1-p) over p in [0, 1].
    A,
    /// General-discrete against Hoeffding over eps, n = 20.
    B,
    /// Crossover deviation mu(n).
    C,
    /// General-discrete against Hoeffding over eps, n = 100.
    D,
}

#[derive(Args, Debug, Serialize)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub panel: Panel,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Sample size for panels b and d; largest n for panel c.
    #[arg(long)]
    pub n: Option<u64>,
    /// Right end of the eps range for panels b and d.
    #[arg(long, default_value = "1/2")]
    pub eps_max: String,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Comma-separated suites, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "theorem1")]
    pub suite: Vec<String>,
    #[arg(long, default_value_t = 6)]
    pub kmax: u64,
    #[arg(long, default_value_t = 12)]
    pub rsmax: u64,
    /// Largest n of the discrete sweep.
    #[arg(long, default_value_t = 40)]
    pub nmax: u64,
    /// Check the n = 33 reference rows instead of sweeping.
    #[arg(long)]
    pub table1: bool,
    #[arg(long, default_value_t = 1000)]
    pub lemma_nmax: u64,
    #[arg(long, default_value = "100")]
    pub delta_max: String,
    #[arg(long, default_value_t = 10_000)]
    pub delta_steps: u64,
    /// Success probability for the limit suites.
    #[arg(long, default_value = "1/2")]
    pub p: String,
    /// Normalized deviation for the normalized suite.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub n_list: Vec<u64>,
    /// Exit with status 3 when any counted check is inconclusive.
    #[arg(long)]
    pub strict: bool,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleSizeArgs {
    #[arg(long, required_unless_present = "rank")]
    pub family: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub n: Option<u64>,
    /// Bound value to reach.
    #[arg(long)]
    pub target: f64,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub force_bisection: bool,
    /// Answer with every plannable family, best first.
    #[arg(long, conflicts_with = "family")]
    pub rank: bool,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bandit-lab", version, about = "Distance-tuned UCB bandit experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one policy on one environment and summarize the regret.
    Run(RunArgs),
    /// Mean regret per (environment, policy) pair.
    Table(ExperimentArgs),
    /// Exploration full / bargain point analysis of a two-armed scenario.
    Bargain(BargainArgs),
    /// Plot-ready curve data.
    #[command(subcommand)]
    Curve(CurveCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ExperimentArgs {
    /// Environment preset(s): B5, B20, B0.02-0.01, B0.9-0.88, N5, N20.
    #[arg(long = "env")]
    pub env: Vec<String>,
    /// Policies: ucb, ucb-dt-mu, ucb-dt-mu-margin, ucb-then-commit.
    #[arg(long = "policy")]
    pub policy: Vec<String>,
    /// Speed parameter of the distance.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Margin of ucb-dt-mu-margin.
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long)]
    pub sims: Option<u64>,
    /// Base seed; falls back to the config file, then BANDIT_LAB_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads. Never changes results.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Number of geometrically spaced snapshot rounds.
    #[arg(long = "log-points")]
    pub log_points: Option<usize>,
    /// Flat JSON file with any of the options above; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: ExperimentArgs,
    /// Also write the per-snapshot mean regret as CSV (round, policy, mean_regret).
    #[arg(long = "curve-out")]
    pub curve_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BargainArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu2: Option<f64>,
    /// Derive the scenario from a preset: best mean vs. smallest positive gap.
    #[arg(long, conflicts_with_all = ["mu1", "mu2"])]
    pub env: Option<String>,
    #[arg(long, default_value_t = crate::sim::DEFAULT_HORIZON)]
    pub horizon: u64,
    /// Divisor in the mistake-probability exponent exp(-n Δ² / divisor).
    #[arg(long = "exponent-divisor", default_value_t = crate::bargain::DEFAULT_EXPONENT_DIVISOR)]
    pub exponent_divisor: f64,
    /// Write (n2, g_lower, g_full) over [0, n_full] to this CSV file.
    #[arg(long = "curve-out")]
    pub curve_out: Option<PathBuf>,
    #[arg(long = "curve-points", default_value_t = 1001)]
    pub curve_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum CurveCommand {
    /// Distance versus pull count at a fixed mean gap.
    Distance(DistanceCurveArgs),
    /// Mean regret versus time, one series per policy.
    Regret(RegretCurveArgs),
}

#[derive(Debug, Args)]
pub struct DistanceCurveArgs {
    #[arg(long, default_value_t = crate::policies::DEFAULT_GAMMA)]
    pub gamma: f64,
    /// Fixed |mean_i - mean_j|.
    #[arg(long, default_value_t = 0.2)]
    pub gap: f64,
    #[arg(long, default_value_t = 300)]
    pub nmax: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RegretCurveArgs {
    #[command(flatten)]
    pub common: ExperimentArgs,
    /// Also render an SVG next to each CSV (requires --out).
    #[arg(long)]
    pub svg: bool,
}

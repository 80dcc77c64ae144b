//! Command line front end.
//!
//! Data goes to `--out` (or stdout), diagnostics to stderr. Exit codes:
//! `0` success, `1` I/O failure, `2` usage or configuration error, `3`
//! infeasible bargain scenario (the marker document is still written).

mod args;
mod config;
mod svg;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;
use thiserror::Error;

pub use args::{Cli, Command, Format};
pub use config::{split_list, Resolved, SEED_ENV_VAR};

use crate::bargain::{analyze, g_lower_curve, BargainOutcome, TwoArmScenario};
use crate::env::Preset;
use crate::policies::{distance_profile, DistanceSpec};
use crate::sim::{run_batch, run_batch_with_workers, RunSummary, SimConfig};
use args::{BargainArgs, CurveCommand, DistanceCurveArgs, RegretCurveArgs, RunArgs};

/// Column order of `table` and `run --format csv`.
pub const TABLE_HEADER: [&str; 9] =
    ["experiment", "policy", "gamma", "margin", "sims", "horizon", "mean_regret", "std_error", "seed"];
pub const REGRET_CURVE_HEADER: [&str; 3] = ["round", "policy", "mean_regret"];
pub const DISTANCE_CURVE_HEADER: [&str; 2] = ["n", "distance"];
pub const BARGAIN_CURVE_HEADER: [&str; 3] = ["n2", "g_lower", "g_full"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] crate::Error),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Csv(_) => 1,
            CliError::Infeasible(_) => 3,
            _ => 2,
        }
    }

    fn io(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// One row of a regret table.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct TableRow {
    pub experiment: String,
    pub policy: String,
    pub gamma: f64,
    pub margin: f64,
    pub sims: u64,
    pub horizon: u64,
    pub mean_regret: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl TableRow {
    fn new(experiment: &str, summary: &RunSummary) -> Self {
        let cfg = &summary.config_echo;
        TableRow {
            experiment: experiment.to_string(),
            policy: cfg.policy.kind.policy_name().to_string(),
            gamma: cfg.policy.gamma,
            margin: cfg.policy.margin,
            sims: summary.n_sims,
            horizon: cfg.horizon,
            mean_regret: summary.mean_regret,
            std_error: summary.std_error,
            seed: cfg.base_seed,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
///
/// `seed_env` stands in for `BANDIT_LAB_SEED`; `stdout` receives data when no
/// `--out` is given.
pub fn run_cli<I, T>(args: I, seed_env: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command, seed_env, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, seed_env: Option<&str>, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Run(args) => cmd_run(args, seed_env, stdout),
        Command::Table(args) => cmd_table(args, seed_env, stdout),
        Command::Bargain(args) => cmd_bargain(args, stdout),
        Command::Curve(CurveCommand::Distance(args)) => cmd_curve_distance(args, stdout),
        Command::Curve(CurveCommand::Regret(args)) => cmd_curve_regret(args, seed_env, stdout),
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    let file = File::create(path).map_err(CliError::io(format!("cannot create {}", path.display())))?;
    Ok(BufWriter::new(file))
}

fn sink<'a>(out: Option<&Path>, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    match out {
        Some(path) => Ok(Box::new(create(path)?)),
        None => Ok(Box::new(stdout)),
    }
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w).map_err(CliError::io("write"))?;
    w.flush().map_err(CliError::io("flush"))
}

fn write_csv_rows<T: Serialize>(w: &mut dyn Write, rows: &[T], header: &[&str]) -> CliResult<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    writer.write_record(header)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(CliError::io("flush"))?;
    Ok(())
}

fn batch(config: &SimConfig, workers: Option<usize>) -> CliResult<RunSummary> {
    Ok(match workers {
        Some(n) => run_batch_with_workers(config, n)?,
        None => run_batch(config)?,
    })
}

fn sim_config(r: &Resolved, env: &str, policy: DistanceSpec) -> SimConfig {
    SimConfig::new(crate::sim::EnvSource::Preset(env.to_string()), policy)
        .horizon(r.horizon)
        .sims(r.sims)
        .seed(r.seed)
        .log_points(r.log_points)
}

fn preset_id(name: &str) -> CliResult<&'static str> {
    Ok(name.parse::<Preset>()?.id())
}

pub fn cmd_run(args: RunArgs, seed_env: Option<&str>, stdout: &mut dyn Write) -> CliResult<()> {
    let r = Resolved::from_args(&args.common, seed_env, Format::Json)?;
    let [env] = r.envs.as_slice() else {
        return Err(CliError::Usage("run takes exactly one --env".into()));
    };
    let [spec] = r.policies.as_slice() else {
        return Err(CliError::Usage("run takes exactly one --policy".into()));
    };
    let id = preset_id(env)?;
    let summary = batch(&sim_config(&r, env, *spec), r.workers)?;
    let mut w = sink(r.out.as_deref(), stdout)?;
    match r.format {
        Format::Json => write_json(&mut *w, &summary)?,
        Format::Csv => write_csv_rows(&mut *w, &[TableRow::new(id, &summary)], &TABLE_HEADER)?,
    }
    if let Some(path) = &args.curve_out {
        let mut f = create(path)?;
        write_csv_rows(&mut f, &curve_rows(&summary), &REGRET_CURVE_HEADER)?;
    }
    Ok(())
}

pub fn cmd_table(args: args::ExperimentArgs, seed_env: Option<&str>, stdout: &mut dyn Write) -> CliResult<()> {
    let r = Resolved::from_args(&args, seed_env, Format::Csv)?;
    let mut rows = Vec::with_capacity(r.envs.len() * r.policies.len());
    for env in &r.envs {
        let id = preset_id(env)?;
        for spec in &r.policies {
            let summary = batch(&sim_config(&r, env, *spec), r.workers)?;
            rows.push(TableRow::new(id, &summary));
        }
    }
    let mut w = sink(r.out.as_deref(), stdout)?;
    match r.format {
        Format::Csv => write_csv_rows(&mut *w, &rows, &TABLE_HEADER),
        Format::Json => write_json(&mut *w, &rows),
    }
}

fn bargain_scenario(args: &BargainArgs) -> CliResult<TwoArmScenario> {
    let (mu1, mu2) = match (&args.env, args.mu1, args.mu2) {
        (Some(name), _, _) => {
            let env = name.parse::<Preset>()?.environment();
            let gap = env.min_positive_gap().ok_or_else(|| CliError::Usage(format!("{name} has no suboptimal arm")))?;
            (env.optimal_mean(), env.optimal_mean() - gap)
        }
        (None, Some(mu1), Some(mu2)) => (mu1, mu2),
        _ => return Err(CliError::Usage("bargain needs --mu1 and --mu2, or --env".into())),
    };
    if mu1 <= mu2 {
        return Err(CliError::Usage(format!("bargain requires mu1 > mu2 (got mu1 = {mu1}, mu2 = {mu2})")));
    }
    Ok(TwoArmScenario::new(mu1, mu2, args.horizon)?.with_exponent_divisor(args.exponent_divisor)?)
}

pub fn cmd_bargain(args: BargainArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let scenario = bargain_scenario(&args)?;
    let outcome = analyze(&scenario)?;
    let mut w = sink(args.out.as_deref(), stdout)?;
    match (&outcome, args.format) {
        (_, Format::Json) => write_json(&mut *w, &outcome)?,
        (BargainOutcome::Feasible(a), Format::Csv) => {
            let mut writer = csv::Writer::from_writer(&mut *w);
            writer.serialize(a)?;
            writer.flush().map_err(CliError::io("flush"))?;
        }
        (BargainOutcome::Infeasible { mu1, mu2, horizon, n_full, .. }, Format::Csv) => {
            let mut writer = csv::Writer::from_writer(&mut *w);
            writer.write_record(["status", "mu1", "mu2", "horizon", "n_full"])?;
            writer.serialize(("infeasible", mu1, mu2, horizon, n_full))?;
            writer.flush().map_err(CliError::io("flush"))?;
        }
    }
    drop(w);
    if let BargainOutcome::Infeasible { n_full, horizon, .. } = outcome {
        return Err(CliError::Infeasible(format!(
            "exploration budget exceeds horizon (n_full = {n_full} >= T = {horizon})"
        )));
    }
    if let Some(path) = &args.curve_out {
        let curve = g_lower_curve(&scenario, args.curve_points)?;
        let mut f = create(path)?;
        write_csv_rows(&mut f, &curve, &BARGAIN_CURVE_HEADER)?;
    }
    Ok(())
}

pub fn cmd_curve_distance(args: DistanceCurveArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if args.gamma.is_nan() || args.gamma <= 0.0 {
        return Err(CliError::Usage(format!("--gamma must be > 0, got {}", args.gamma)));
    }
    let profile = distance_profile(args.gamma, args.gap, args.nmax)?;
    let mut w = sink(args.out.as_deref(), stdout)?;
    match args.format {
        Format::Csv => write_csv_rows(&mut *w, &profile, &DISTANCE_CURVE_HEADER),
        Format::Json => {
            #[derive(Serialize)]
            struct Point {
                n: u64,
                distance: f64,
            }
            let points: Vec<Point> = profile.into_iter().map(|(n, distance)| Point { n, distance }).collect();
            write_json(&mut *w, &points)
        }
    }
}

fn curve_rows(summary: &RunSummary) -> Vec<(u64, &'static str, f64)> {
    let name = summary.config_echo.policy.kind.policy_name();
    summary.snapshot_rounds.iter().zip(&summary.per_snapshot_mean).map(|(&round, &mean)| (round, name, mean)).collect()
}

pub fn cmd_curve_regret(args: RegretCurveArgs, seed_env: Option<&str>, stdout: &mut dyn Write) -> CliResult<()> {
    let r = Resolved::from_args(&args.common, seed_env, Format::Csv)?;
    if r.format != Format::Csv {
        return Err(CliError::Usage("curve regret writes CSV only".into()));
    }
    let multi = r.envs.len() > 1;
    if (multi || args.svg) && r.out.is_none() {
        return Err(CliError::Usage(
            "--out is required with several environments or --svg (a directory when several)".into(),
        ));
    }
    if multi {
        let dir = r.out.as_ref().expect("checked above");
        std::fs::create_dir_all(dir).map_err(CliError::io(format!("cannot create {}", dir.display())))?;
    }
    for env in &r.envs {
        let id = preset_id(env)?;
        let summaries = r
            .policies
            .iter()
            .map(|spec| batch(&sim_config(&r, env, *spec), r.workers))
            .collect::<CliResult<Vec<_>>>()?;
        let rows: Vec<_> = summaries.iter().flat_map(curve_rows).collect();
        let path: Option<PathBuf> = match &r.out {
            Some(dir) if multi => Some(dir.join(format!("{id}.csv"))),
            other => other.clone(),
        };
        let mut w = sink(path.as_deref(), &mut *stdout)?;
        write_csv_rows(&mut *w, &rows, &REGRET_CURVE_HEADER)?;
        drop(w);
        if args.svg {
            let svg_path = path.expect("checked above").with_extension("svg");
            let doc = svg::regret_plot(id, &summaries);
            std::fs::write(&svg_path, doc).map_err(CliError::io(format!("cannot write {}", svg_path.display())))?;
        }
    }
    Ok(())
}

/// Entry point of the `bandit-lab` binary.
pub fn main() -> i32 {
    let seed_env = std::env::var(SEED_ENV_VAR).ok();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let stderr = io::stderr();
    let mut err = stderr.lock();
    run_cli(std::env::args_os(), seed_env.as_deref(), &mut out, &mut err)
}

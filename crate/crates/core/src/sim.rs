//! Seeded Monte-Carlo episodes and pseudo-regret accounting.
//!
//! Simulation `i` of a batch draws rewards from `reward_stream(base_seed, i)`
//! and results are aggregated in index order, so a batch summary is
//! bit-identical whatever the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::{reward_stream, ArmDistribution, Environment, Preset};
use crate::error::{Error, Result};
use crate::policies::{CachedUcbDt, DistanceSpec, Policy, PolicyState};

pub const DEFAULT_HORIZON: u64 = 20_000;
pub const DEFAULT_SIMS: u64 = 2000;
pub const DEFAULT_LOG_POINTS: usize = 50;

/// Where the arms of a batch come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnvSource {
    Preset(String),
    Arms(Vec<ArmDistribution>),
}

impl EnvSource {
    pub fn build(&self) -> Result<Environment> {
        match self {
            EnvSource::Preset(name) => Ok(name.parse::<Preset>()?.environment()),
            EnvSource::Arms(arms) => Environment::new(arms.clone()),
        }
    }

    /// Identifier used in tables: the preset id, or `inline`.
    pub fn label(&self) -> String {
        match self {
            EnvSource::Preset(name) => {
                name.parse::<Preset>().map(|p| p.id().to_string()).unwrap_or_else(|_| name.clone())
            }
            EnvSource::Arms(_) => "inline".to_string(),
        }
    }
}

impl From<Preset> for EnvSource {
    fn from(p: Preset) -> Self {
        EnvSource::Preset(p.id().to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub environment: EnvSource,
    pub policy: DistanceSpec,
    pub horizon: u64,
    pub n_sims: u64,
    pub base_seed: u64,
    /// Number of geometrically spaced snapshot rounds.
    pub log_points: usize,
}

impl SimConfig {
    pub fn new(environment: impl Into<EnvSource>, policy: DistanceSpec) -> Self {
        Self {
            environment: environment.into(),
            policy,
            horizon: DEFAULT_HORIZON,
            n_sims: DEFAULT_SIMS,
            base_seed: 0,
            log_points: DEFAULT_LOG_POINTS,
        }
    }

    pub fn horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn sims(mut self, n_sims: u64) -> Self {
        self.n_sims = n_sims;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    pub fn log_points(mut self, log_points: usize) -> Self {
        self.log_points = log_points;
        self
    }

    /// Checks every invariant and returns the built environment.
    pub fn validate(&self) -> Result<Environment> {
        self.policy.validate()?;
        let env = self.environment.build()?;
        if self.horizon < env.n_arms() as u64 {
            return Err(Error::InvalidConfig(format!(
                "horizon {} is shorter than the {} initialization rounds",
                self.horizon,
                env.n_arms()
            )));
        }
        if self.n_sims < 1 {
            return Err(Error::InvalidConfig("n_sims must be >= 1".into()));
        }
        if self.log_points < 1 {
            return Err(Error::InvalidConfig("log_points must be >= 1".into()));
        }
        Ok(env)
    }
}

/// Pseudo-regret of one run after `n` snapshots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretTrace {
    pub snapshot_rounds: Vec<u64>,
    pub cumulative_regret: Vec<f64>,
    pub final_counts: Vec<u64>,
}

impl RegretTrace {
    pub fn final_regret(&self) -> f64 {
        *self.cumulative_regret.last().expect("schedule always includes T")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub mean_regret: f64,
    /// Sample standard deviation over `√n_sims`; 0 for a single run.
    pub std_error: f64,
    pub snapshot_rounds: Vec<u64>,
    pub per_snapshot_mean: Vec<f64>,
    pub mean_final_counts: Vec<f64>,
    pub n_sims: u64,
    pub config_echo: SimConfig,
}

/// `Σ_i gaps[i]·counts[i]`.
pub fn pseudo_regret(counts: &[u64], gaps: &[f64]) -> Result<f64> {
    if counts.len() != gaps.len() {
        return Err(Error::LengthMismatch { left: counts.len(), right: gaps.len() });
    }
    Ok(counts.iter().zip(gaps).map(|(&n, &g)| g * n as f64).sum())
}

/// `points` rounds spaced geometrically from `first` to `horizon`, rounded
/// and deduplicated; always strictly increasing and ending at `horizon`.
pub fn snapshot_schedule(first: u64, horizon: u64, points: usize) -> Vec<u64> {
    let first = first.clamp(1, horizon.max(1));
    if points <= 1 || first >= horizon {
        return vec![horizon];
    }
    let ratio = (horizon as f64 / first as f64).ln();
    let mut rounds: Vec<u64> = Vec::with_capacity(points);
    for i in 0..points {
        let r = if i + 1 == points {
            horizon
        } else {
            let x = first as f64 * (ratio * i as f64 / (points - 1) as f64).exp();
            (x.round() as u64).clamp(first, horizon)
        };
        if rounds.last().is_none_or(|&last| r > last) {
            rounds.push(r);
        }
    }
    rounds
}

/// Plays `horizon` rounds of `policy` on `env`, recording pseudo-regret at
/// each round in `schedule`.
pub fn run_with_policy(
    env: &Environment,
    policy: &mut dyn Policy,
    horizon: u64,
    seed: u64,
    schedule: &[u64],
) -> Result<RegretTrace> {
    let k = env.n_arms();
    if horizon < k as u64 {
        return Err(Error::InvalidConfig(format!("horizon {horizon} < {k} arms")));
    }
    let mut rng = reward_stream(seed, 0);
    let mut state = PolicyState::new(k);
    policy.reset(k);
    let mut cumulative = Vec::with_capacity(schedule.len());
    let mut next = schedule.iter().copied().filter(|&r| r <= horizon).peekable();
    for _ in 0..horizon {
        let arm = policy.choose(&state)?;
        let reward = env.arms()[arm].sample(&mut rng);
        state.update(arm, reward)?;
        if next.peek() == Some(&state.t()) {
            next.next();
            cumulative.push(pseudo_regret(state.counts(), env.gaps())?);
        }
    }
    Ok(RegretTrace {
        snapshot_rounds: schedule.iter().copied().filter(|&r| r <= horizon).collect(),
        cumulative_regret: cumulative,
        final_counts: state.counts().to_vec(),
    })
}

/// One seeded UCB / UCB-DT episode with a single snapshot at `horizon`.
pub fn run_single(env: &Environment, spec: &DistanceSpec, horizon: u64, seed: u64) -> Result<RegretTrace> {
    run_single_logged(env, spec, horizon, seed, 1)
}

pub fn run_single_logged(
    env: &Environment,
    spec: &DistanceSpec,
    horizon: u64,
    seed: u64,
    log_points: usize,
) -> Result<RegretTrace> {
    spec.validate()?;
    let schedule = snapshot_schedule(env.n_arms() as u64, horizon, log_points);
    run_with_policy(env, &mut CachedUcbDt::new(*spec), horizon, seed, &schedule)
}

/// Runs the batch on rayon's global pool.
pub fn run_batch(config: &SimConfig) -> Result<RunSummary> {
    let env = config.validate()?;
    let traces = (0..config.n_sims)
        .into_par_iter()
        .map(|i| run_single_logged(&env, &config.policy, config.horizon, config.base_seed ^ i, config.log_points))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(config, traces))
}

/// Runs the batch on a dedicated pool of `workers` threads. The summary does
/// not depend on `workers`.
pub fn run_batch_with_workers(config: &SimConfig, workers: usize) -> Result<RunSummary> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_batch(config))
}

fn summarize(config: &SimConfig, traces: Vec<RegretTrace>) -> RunSummary {
    let n = traces.len();
    let finals: Vec<f64> = traces.iter().map(RegretTrace::final_regret).collect();
    let mean = finals.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let var = finals.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    let rounds = traces[0].snapshot_rounds.clone();
    let mut per_snapshot = vec![0.0; rounds.len()];
    let mut counts = vec![0.0; traces[0].final_counts.len()];
    for trace in &traces {
        for (acc, r) in per_snapshot.iter_mut().zip(&trace.cumulative_regret) {
            *acc += r;
        }
        for (acc, &c) in counts.iter_mut().zip(&trace.final_counts) {
            *acc += c as f64;
        }
    }
    per_snapshot.iter_mut().for_each(|v| *v /= n as f64);
    counts.iter_mut().for_each(|v| *v /= n as f64);
    RunSummary {
        mean_regret: mean,
        std_error,
        snapshot_rounds: rounds,
        per_snapshot_mean: per_snapshot,
        mean_final_counts: counts,
        n_sims: n as u64,
        config_echo: config.clone(),
    }
}

//! C ABI over `bandit-lab`.
//!
//! Every fallible function returns a [`BlStatus`]; on failure a message is
//! available from [`bl_last_error_message`] on the calling thread. Handles are
//! opaque, created by `*_new`/`*_from_*`/`bl_run_batch` and released by the
//! matching `*_free`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bandit_lab::bargain::{analyze, BargainOutcome, TwoArmScenario};
use bandit_lab::env::{Environment, Preset};
use bandit_lab::lambert::{lambert_w, Branch};
use bandit_lab::policies::{powered_gap, DistanceKind, DistanceSpec};
use bandit_lab::sim::{run_batch, run_batch_with_workers, EnvSource, RunSummary, SimConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Infeasible = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Arm-selection rule.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlPolicy {
    Ucb = 0,
    UcbDtMu = 1,
    UcbDtMuMargin = 2,
    UcbThenCommit = 3,
}

/// Lambert W branch.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlBranch {
    Principal = 0,
    Lower = 1,
}

/// Opaque bandit environment.
pub struct BlEnvironment {
    inner: Environment,
}

/// Opaque result of a Monte-Carlo batch.
pub struct BlSummary {
    inner: RunSummary,
}

/// Parameters of a batch; start from [`bl_sim_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BlSimConfig {
    pub policy: BlPolicy,
    pub gamma: f64,
    pub margin: f64,
    pub horizon: u64,
    pub n_sims: u64,
    pub base_seed: u64,
    /// Number of geometrically spaced snapshot rounds.
    pub log_points: usize,
    /// Worker threads; 0 uses the global pool. Never changes results.
    pub workers: usize,
}

/// Exploration full / bargain point analysis of a two-armed scenario.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BlBargain {
    pub mu1: f64,
    pub mu2: f64,
    pub horizon: u64,
    pub delta: f64,
    pub exponent_divisor: f64,
    pub n_full: f64,
    pub n_bargain: f64,
    pub n2_star: f64,
    pub n2_star_closed_form: f64,
    pub g_full: f64,
    pub g_lower_at_bargain: f64,
    pub g_lower_at_n2_star: f64,
    pub g_lower_at_full: f64,
    pub residual_at_bargain: f64,
    pub gamma_recommended: f64,
}

struct Failure {
    status: BlStatus,
    message: String,
}

impl Failure {
    fn new(status: BlStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }
}

impl From<bandit_lab::Error> for Failure {
    fn from(e: bandit_lab::Error) -> Self {
        let status = match e {
            bandit_lab::Error::Infeasible { .. } => BlStatus::Infeasible,
            _ => BlStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BlStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".to_string());
        Err(Failure::new(BlStatus::Panic, message))
    });
    match outcome {
        Ok(()) => {
            set_last_error("");
            BlStatus::Ok
        }
        Err(failure) => {
            set_last_error(&failure.message);
            failure.status
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(BlStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Message of the last failed call on this thread, or an empty string.
/// Valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn bl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a preset environment (`B5`, `B20`, `B0.02-0.01`, `B0.9-0.88`, `N5`, `N20`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_environment_from_preset(name: *const c_char, out: *mut *mut BlEnvironment) -> BlStatus {
    guard(|| {
        non_null(name, "name")?;
        non_null(out, "out")?;
        let name =
            CStr::from_ptr(name).to_str().map_err(|_| Failure::new(BlStatus::InvalidArgument, "name is not UTF-8"))?;
        let inner = name.parse::<Preset>()?.environment();
        *out = Box::into_raw(Box::new(BlEnvironment { inner }));
        Ok(())
    })
}

unsafe fn environment_from_means(
    means: *const f64,
    len: usize,
    out: *mut *mut BlEnvironment,
    build: fn(&[f64]) -> bandit_lab::Result<Environment>,
) -> BlStatus {
    guard(|| {
        non_null(means, "means")?;
        non_null(out, "out")?;
        let inner = build(std::slice::from_raw_parts(means, len))?;
        *out = Box::into_raw(Box::new(BlEnvironment { inner }));
        Ok(())
    })
}

/// Builds an environment of Bernoulli arms with the given means in `[0, 1]`.
///
/// # Safety
/// `means` must point to `len` readable doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bl_environment_bernoulli(
    means: *const f64,
    len: usize,
    out: *mut *mut BlEnvironment,
) -> BlStatus {
    environment_from_means(means, len, out, Environment::bernoulli)
}

/// Builds an environment of unit-variance Gaussian arms.
///
/// # Safety
/// `means` must point to `len` readable doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bl_environment_gaussian(
    means: *const f64,
    len: usize,
    out: *mut *mut BlEnvironment,
) -> BlStatus {
    environment_from_means(means, len, out, Environment::gaussian)
}

/// Number of arms, or 0 for a null handle.
///
/// # Safety
/// `env` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_environment_num_arms(env: *const BlEnvironment) -> usize {
    env.as_ref().map_or(0, |e| e.inner.n_arms())
}

/// Copies the suboptimality gaps into `out[0..len]`; `len` must be at least
/// the number of arms.
///
/// # Safety
/// `env` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bl_environment_gaps(env: *const BlEnvironment, out: *mut f64, len: usize) -> BlStatus {
    guard(|| {
        non_null(env, "env")?;
        non_null(out, "out")?;
        let gaps = (*env).inner.gaps();
        if len < gaps.len() {
            return Err(Failure::new(BlStatus::BufferTooSmall, format!("need {} slots, got {len}", gaps.len())));
        }
        ptr::copy_nonoverlapping(gaps.as_ptr(), out, gaps.len());
        Ok(())
    })
}

/// Releases an environment. Null is ignored.
///
/// # Safety
/// `env` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bl_environment_free(env: *mut BlEnvironment) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Defaults: UCB-DT(mu), gamma 0.02, margin 0.05, T = 20000, 2000 runs,
/// seed 0, 50 snapshots, global pool.
#[no_mangle]
pub extern "C" fn bl_sim_config_default() -> BlSimConfig {
    BlSimConfig {
        policy: BlPolicy::UcbDtMu,
        gamma: bandit_lab::policies::DEFAULT_GAMMA,
        margin: bandit_lab::policies::DEFAULT_MARGIN,
        horizon: bandit_lab::sim::DEFAULT_HORIZON,
        n_sims: bandit_lab::sim::DEFAULT_SIMS,
        base_seed: 0,
        log_points: bandit_lab::sim::DEFAULT_LOG_POINTS,
        workers: 0,
    }
}

fn policy_kind(policy: BlPolicy) -> DistanceKind {
    match policy {
        BlPolicy::Ucb => DistanceKind::None,
        BlPolicy::UcbDtMu => DistanceKind::Mu,
        BlPolicy::UcbDtMuMargin => DistanceKind::MuMargin,
        BlPolicy::UcbThenCommit => DistanceKind::ThenCommit,
    }
}

/// Runs a seeded Monte-Carlo batch. Equal inputs give bit-identical summaries.
///
/// # Safety
/// `env` and `config` must be live, `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bl_run_batch(
    env: *const BlEnvironment,
    config: *const BlSimConfig,
    out: *mut *mut BlSummary,
) -> BlStatus {
    guard(|| {
        non_null(env, "env")?;
        non_null(config, "config")?;
        non_null(out, "out")?;
        let c = *config;
        let spec = DistanceSpec::new(policy_kind(c.policy), c.gamma, c.margin)?;
        let sim = SimConfig::new(EnvSource::Arms((*env).inner.arms().to_vec()), spec)
            .horizon(c.horizon)
            .sims(c.n_sims)
            .seed(c.base_seed)
            .log_points(c.log_points);
        let inner = match c.workers {
            0 => run_batch(&sim)?,
            n => run_batch_with_workers(&sim, n)?,
        };
        *out = Box::into_raw(Box::new(BlSummary { inner }));
        Ok(())
    })
}

/// Mean final pseudo-regret, or NaN for a null handle.
///
/// # Safety
/// `summary` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_summary_mean_regret(summary: *const BlSummary) -> f64 {
    summary.as_ref().map_or(f64::NAN, |s| s.inner.mean_regret)
}

/// Standard error of the mean final pseudo-regret, or NaN for a null handle.
///
/// # Safety
/// `summary` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_summary_std_error(summary: *const BlSummary) -> f64 {
    summary.as_ref().map_or(f64::NAN, |s| s.inner.std_error)
}

/// Number of snapshot rounds, or 0 for a null handle.
///
/// # Safety
/// `summary` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_summary_num_snapshots(summary: *const BlSummary) -> usize {
    summary.as_ref().map_or(0, |s| s.inner.snapshot_rounds.len())
}

/// Copies snapshot rounds and mean cumulative regret into two arrays of
/// `len` slots each.
///
/// # Safety
/// `summary` must be live; `rounds` and `mean_regret` must point to `len`
/// writable elements.
#[no_mangle]
pub unsafe extern "C" fn bl_summary_snapshots(
    summary: *const BlSummary,
    rounds: *mut u64,
    mean_regret: *mut f64,
    len: usize,
) -> BlStatus {
    guard(|| {
        non_null(summary, "summary")?;
        non_null(rounds, "rounds")?;
        non_null(mean_regret, "mean_regret")?;
        let s = &(*summary).inner;
        let n = s.snapshot_rounds.len();
        if len < n {
            return Err(Failure::new(BlStatus::BufferTooSmall, format!("need {n} slots, got {len}")));
        }
        ptr::copy_nonoverlapping(s.snapshot_rounds.as_ptr(), rounds, n);
        ptr::copy_nonoverlapping(s.per_snapshot_mean.as_ptr(), mean_regret, n);
        Ok(())
    })
}

/// Releases a summary. Null is ignored.
///
/// # Safety
/// `summary` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bl_summary_free(summary: *mut BlSummary) {
    if !summary.is_null() {
        drop(Box::from_raw(summary));
    }
}

/// Analyzes a two-armed scenario with `mu1 > mu2`. Returns
/// `BL_STATUS_INFEASIBLE` when the full exploration budget reaches the
/// horizon; `out` then carries the means, horizon, gap and `n_full`, and the
/// remaining fields are NaN.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_bargain_analyze(
    mu1: f64,
    mu2: f64,
    horizon: u64,
    exponent_divisor: f64,
    out: *mut BlBargain,
) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        if mu1.is_nan() || mu2.is_nan() || mu1 <= mu2 {
            return Err(Failure::new(BlStatus::InvalidArgument, format!("need mu1 > mu2, got {mu1} and {mu2}")));
        }
        let scenario = TwoArmScenario::new(mu1, mu2, horizon)?.with_exponent_divisor(exponent_divisor)?;
        match analyze(&scenario)? {
            BargainOutcome::Feasible(a) => {
                *out = BlBargain {
                    mu1: a.mu1,
                    mu2: a.mu2,
                    horizon: a.horizon,
                    delta: a.delta,
                    exponent_divisor: a.exponent_divisor,
                    n_full: a.n_full,
                    n_bargain: a.n_bargain,
                    n2_star: a.n2_star,
                    n2_star_closed_form: a.n2_star_closed_form,
                    g_full: a.g_full,
                    g_lower_at_bargain: a.g_lower_at_bargain,
                    g_lower_at_n2_star: a.g_lower_at_n2_star,
                    g_lower_at_full: a.g_lower_at_full,
                    residual_at_bargain: a.residual_at_bargain,
                    gamma_recommended: a.gamma_recommended,
                };
                Ok(())
            }
            BargainOutcome::Infeasible { n_full, reason, .. } => {
                let nan = f64::NAN;
                *out = BlBargain {
                    mu1,
                    mu2,
                    horizon,
                    delta: scenario.delta(),
                    exponent_divisor,
                    n_full,
                    n_bargain: nan,
                    n2_star: nan,
                    n2_star_closed_form: nan,
                    g_full: nan,
                    g_lower_at_bargain: nan,
                    g_lower_at_n2_star: nan,
                    g_lower_at_full: nan,
                    residual_at_bargain: nan,
                    gamma_recommended: nan,
                };
                Err(Failure::new(BlStatus::Infeasible, format!("{reason} (n_full = {n_full}, T = {horizon})")))
            }
        }
    })
}

/// Lambert W on the chosen branch.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_lambert_w(branch: BlBranch, x: f64, out: *mut f64) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        let branch = match branch {
            BlBranch::Principal => Branch::Principal,
            BlBranch::Lower => Branch::Lower,
        };
        *out = lambert_w(branch, x)?;
        Ok(())
    })
}

/// Mean-gap distance of an arm pulled `n_pulls` times whose empirical mean
/// differs from another arm's by `mean_gap`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_distance_mu(gamma: f64, mean_gap: f64, n_pulls: u64, out: *mut f64) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        DistanceSpec::mu(gamma)?;
        if !mean_gap.is_finite() {
            return Err(Failure::new(BlStatus::InvalidArgument, "mean_gap must be finite"));
        }
        *out = powered_gap(mean_gap.abs(), n_pulls, gamma);
        Ok(())
    })
}

/// Nonzero when `status` is `BL_STATUS_OK`.
#[no_mangle]
pub extern "C" fn bl_status_is_ok(status: BlStatus) -> c_int {
    c_int::from(status == BlStatus::Ok)
}

//! UCB index and its distance-tuned variant.
//!
//! The index of arm `i` is `μ̂_i + √(2 ln t / Ñ_i)` where `t` is the number of
//! completed rounds and `Ñ_i = N_i + Σ_{j≠i} d(i, j)·N_j` is the effective
//! count. Every arm is pulled once, in index order, before any index is
//! computed.

use serde::Serialize;

use super::distance::{commit_step, powered_gap, Distance, DistanceKind, DistanceSpec};
use super::state::PolicyState;
use crate::error::Result;

/// Outcome of one selection round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    pub arm: usize,
    /// Decision index per arm; `+∞` marks forced initialization.
    pub index_values: Vec<f64>,
    pub effective_counts: Vec<f64>,
}

/// `Ñ_i = N_i + Σ_{j≠i} d(i, j)·N_j`, or plain `N_i` for standard UCB.
pub fn effective_counts<D: Distance + ?Sized>(state: &PolicyState, distance: &D) -> Result<Vec<f64>> {
    let counts = state.counts();
    if distance.is_plain_ucb() {
        return Ok(counts.iter().map(|&n| n as f64).collect());
    }
    let k = counts.len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut acc = counts[i] as f64;
        for (j, &n_j) in counts.iter().enumerate() {
            if j != i {
                acc += distance.distance(state, i, j)? * n_j as f64;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Exploration bonus `√(2 ln t / ñ)`.
#[inline]
pub fn confidence_radius(t: u64, effective_count: f64) -> f64 {
    (2.0 * (t as f64).ln() / effective_count).sqrt()
}

/// Lowest index attaining the maximum.
pub fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn forced_selection(state: &PolicyState, arm: usize) -> Selection {
    let index_values = state.counts().iter().map(|&n| if n == 0 { f64::INFINITY } else { f64::NAN }).collect();
    let effective_counts = state.counts().iter().map(|&n| n as f64).collect();
    Selection { arm, index_values, effective_counts }
}

fn indices(state: &PolicyState, effective: &[f64]) -> Vec<f64> {
    let t = state.t();
    state.means().iter().zip(effective).map(|(&mean, &n_eff)| mean + confidence_radius(t, n_eff)).collect()
}

/// One UCB-DT decision from the statistics at the end of the previous round.
pub fn select_arm<D: Distance + ?Sized>(state: &PolicyState, distance: &D) -> Result<Selection> {
    if let Some(arm) = state.first_unpulled() {
        return Ok(forced_selection(state, arm));
    }
    let effective_counts = effective_counts(state, distance)?;
    let index_values = indices(state, &effective_counts);
    let arm = argmax_lowest(&index_values);
    Ok(Selection { arm, index_values, effective_counts })
}

/// A sequential bandit policy.
///
/// Index policies not built on a distance (KL-UCB and friends) plug in here.
pub trait Policy {
    fn name(&self) -> &str;

    /// Clears any internal state before a new run on `n_arms` arms.
    fn reset(&mut self, n_arms: usize);

    /// Picks the next arm from the statistics after the last update.
    fn choose(&mut self, state: &PolicyState) -> Result<usize>;
}

/// UCB-DT over any [`Distance`], recomputing every distance each round.
pub struct DistancePolicy<D> {
    name: String,
    distance: D,
}

impl<D: Distance> DistancePolicy<D> {
    pub fn new(name: impl Into<String>, distance: D) -> Self {
        Self { name: name.into(), distance }
    }
}

impl<D: Distance> Policy for DistancePolicy<D> {
    fn name(&self) -> &str {
        &self.name
    }

    fn reset(&mut self, _n_arms: usize) {}

    fn choose(&mut self, state: &PolicyState) -> Result<usize> {
        Ok(select_arm(state, &self.distance)?.arm)
    }
}

/// UCB-DT for the built-in distances with a cached distance matrix.
///
/// Only the row and column of the most recently pulled arm change between
/// rounds, so each round costs `O(k)` distance evaluations instead of
/// `O(k²)`. Effective counts are summed in the same order as
/// [`effective_counts`], which keeps decisions bit-identical to
/// [`select_arm`].
pub struct CachedUcbDt {
    spec: DistanceSpec,
    n_arms: usize,
    // row-major d(i, j); diagonal unused
    matrix: Vec<f64>,
    // counts as of the last refresh, to find the changed arm
    seen: Vec<u64>,
    primed: bool,
    effective: Vec<f64>,
    index_values: Vec<f64>,
}

impl CachedUcbDt {
    pub fn new(spec: DistanceSpec) -> Self {
        Self {
            spec,
            n_arms: 0,
            matrix: Vec::new(),
            seen: Vec::new(),
            primed: false,
            effective: Vec::new(),
            index_values: Vec::new(),
        }
    }

    pub fn spec(&self) -> &DistanceSpec {
        &self.spec
    }

    #[inline]
    fn entry(&self, state: &PolicyState, i: usize, j: usize) -> f64 {
        let means = state.means();
        let n_i = state.count(i);
        match self.spec.kind {
            DistanceKind::None => 0.0,
            DistanceKind::Mu => powered_gap((means[i] - means[j]).abs(), n_i, self.spec.gamma),
            DistanceKind::MuMargin => {
                powered_gap(((means[i] - means[j]).abs() - self.spec.margin).max(0.0), n_i, self.spec.gamma)
            }
            DistanceKind::ThenCommit => commit_step(n_i, self.spec.gamma),
        }
    }

    fn refresh_arm(&mut self, state: &PolicyState, a: usize) {
        let k = self.n_arms;
        for j in 0..k {
            if j != a {
                self.matrix[a * k + j] = self.entry(state, a, j);
                self.matrix[j * k + a] = self.entry(state, j, a);
            }
        }
    }

    fn refresh(&mut self, state: &PolicyState) {
        let k = self.n_arms;
        if !self.primed {
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        self.matrix[i * k + j] = self.entry(state, i, j);
                    }
                }
            }
            self.primed = true;
        } else {
            for a in 0..k {
                if state.count(a) != self.seen[a] {
                    self.refresh_arm(state, a);
                }
            }
        }
        self.seen.copy_from_slice(state.counts());
    }

    /// Effective counts and indices of the last decision.
    pub fn last_selection(&self) -> (&[f64], &[f64]) {
        (&self.effective, &self.index_values)
    }
}

impl Policy for CachedUcbDt {
    fn name(&self) -> &str {
        self.spec.kind.policy_name()
    }

    fn reset(&mut self, n_arms: usize) {
        self.n_arms = n_arms;
        self.matrix = vec![0.0; n_arms * n_arms];
        self.seen = vec![0; n_arms];
        self.primed = false;
        self.effective = vec![0.0; n_arms];
        self.index_values = vec![0.0; n_arms];
    }

    fn choose(&mut self, state: &PolicyState) -> Result<usize> {
        if self.n_arms != state.n_arms() {
            self.reset(state.n_arms());
        }
        if let Some(arm) = state.first_unpulled() {
            return Ok(arm);
        }
        let k = self.n_arms;
        let counts = state.counts();
        if self.spec.kind == DistanceKind::None {
            for (e, &n) in self.effective.iter_mut().zip(counts) {
                *e = n as f64;
            }
        } else {
            self.refresh(state);
            for i in 0..k {
                let row = &self.matrix[i * k..(i + 1) * k];
                let mut acc = counts[i] as f64;
                for (j, &n_j) in counts.iter().enumerate() {
                    if j != i {
                        acc += row[j] * n_j as f64;
                    }
                }
                self.effective[i] = acc;
            }
        }
        let t = state.t();
        for ((v, &mean), &n_eff) in self.index_values.iter_mut().zip(state.means()).zip(&self.effective) {
            *v = mean + confidence_radius(t, n_eff);
        }
        Ok(argmax_lowest(&self.index_values))
    }
}

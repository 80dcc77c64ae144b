use serde::Serialize;

use crate::error::{Error, Result};

/// Per-run statistics: round counter, pull counts, reward sums and
/// empirical means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyState {
    t: u64,
    counts: Vec<u64>,
    reward_sums: Vec<f64>,
    means: Vec<f64>,
}

impl PolicyState {
    pub fn new(n_arms: usize) -> Self {
        Self { t: 0, counts: vec![0; n_arms], reward_sums: vec![0.0; n_arms], means: vec![f64::NAN; n_arms] }
    }

    /// Builds a state directly from counts and reward sums.
    pub fn from_parts(counts: Vec<u64>, reward_sums: Vec<f64>) -> Result<Self> {
        if counts.len() != reward_sums.len() {
            return Err(Error::LengthMismatch { left: counts.len(), right: reward_sums.len() });
        }
        let t = counts.iter().sum();
        let means =
            counts.iter().zip(&reward_sums).map(|(&n, &s)| if n > 0 { s / n as f64 } else { f64::NAN }).collect();
        Ok(Self { t, counts, reward_sums, means })
    }

    /// Builds a state with the given counts whose empirical means are exactly
    /// `means` (reward sums are `mean * count`).
    pub fn with_means(counts: Vec<u64>, means: Vec<f64>) -> Result<Self> {
        if counts.len() != means.len() {
            return Err(Error::LengthMismatch { left: counts.len(), right: means.len() });
        }
        let reward_sums = counts.iter().zip(&means).map(|(&n, &m)| m * n as f64).collect();
        let t = counts.iter().sum();
        let means = counts.iter().zip(means).map(|(&n, m)| if n > 0 { m } else { f64::NAN }).collect();
        Ok(Self { t, counts, reward_sums, means })
    }

    pub fn n_arms(&self) -> usize {
        self.counts.len()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn reward_sums(&self) -> &[f64] {
        &self.reward_sums
    }

    /// Empirical means; `NaN` for arms never pulled.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn mean(&self, arm: usize) -> Result<f64> {
        self.check_arm(arm)?;
        if self.counts[arm] == 0 {
            return Err(Error::UndefinedMean { arm });
        }
        Ok(self.means[arm])
    }

    pub fn first_unpulled(&self) -> Option<usize> {
        self.counts.iter().position(|&n| n == 0)
    }

    pub fn check_arm(&self, arm: usize) -> Result<()> {
        if arm >= self.counts.len() {
            return Err(Error::ArmOutOfRange { arm, n_arms: self.counts.len() });
        }
        Ok(())
    }

    /// Records `reward` for `arm` and advances the round counter.
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<()> {
        self.check_arm(arm)?;
        self.t += 1;
        self.counts[arm] += 1;
        self.reward_sums[arm] += reward;
        self.means[arm] = self.reward_sums[arm] / self.counts[arm] as f64;
        Ok(())
    }
}

/// Functional form of [`PolicyState::update`].
pub fn update_state(mut state: PolicyState, arm: usize, reward: f64) -> Result<PolicyState> {
    state.update(arm, reward)?;
    Ok(state)
}

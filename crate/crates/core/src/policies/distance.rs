//! Bandit distances: how similar two arms look given the current statistics.
//!
//! Every distance lies in `[0, 1]`. A distance that is identically zero
//! recovers plain UCB, one that is identically one recovers greedy play.
//! `d(i, j)` depends on the pull count of `i` only, so it is not symmetric.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::state::PolicyState;
use crate::error::{Error, Result};

pub const DEFAULT_GAMMA: f64 = 0.02;
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistanceKind {
    /// No distance: standard UCB.
    #[serde(rename = "ucb")]
    None,
    #[serde(rename = "ucb-dt-mu")]
    Mu,
    #[serde(rename = "ucb-dt-mu-margin")]
    MuMargin,
    #[serde(rename = "ucb-then-commit")]
    ThenCommit,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 4] =
        [DistanceKind::None, DistanceKind::Mu, DistanceKind::ThenCommit, DistanceKind::MuMargin];

    /// Stable policy name.
    pub fn policy_name(self) -> &'static str {
        match self {
            DistanceKind::None => "ucb",
            DistanceKind::Mu => "ucb-dt-mu",
            DistanceKind::MuMargin => "ucb-dt-mu-margin",
            DistanceKind::ThenCommit => "ucb-then-commit",
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.policy_name())
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        DistanceKind::ALL
            .into_iter()
            .find(|k| k.policy_name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownPolicy { name: s.to_string() })
    }
}

/// Distance measure plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceSpec {
    pub kind: DistanceKind,
    /// Speed parameter: how fast the distance expands towards 1.
    pub gamma: f64,
    /// Margin subtracted from the mean gap (`MuMargin` only).
    pub margin: f64,
}

impl Default for DistanceSpec {
    fn default() -> Self {
        Self { kind: DistanceKind::None, gamma: DEFAULT_GAMMA, margin: DEFAULT_MARGIN }
    }
}

impl DistanceSpec {
    pub fn new(kind: DistanceKind, gamma: f64, margin: f64) -> Result<Self> {
        let spec = Self { kind, gamma, margin };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ucb() -> Self {
        Self::default()
    }

    pub fn mu(gamma: f64) -> Result<Self> {
        Self::new(DistanceKind::Mu, gamma, DEFAULT_MARGIN)
    }

    pub fn mu_margin(gamma: f64, margin: f64) -> Result<Self> {
        Self::new(DistanceKind::MuMargin, gamma, margin)
    }

    pub fn then_commit(gamma: f64) -> Result<Self> {
        Self::new(DistanceKind::ThenCommit, gamma, DEFAULT_MARGIN)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidDistance(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if !(0.0..1.0).contains(&self.margin) {
            return Err(Error::InvalidDistance(format!("margin must lie in [0, 1), got {}", self.margin)));
        }
        Ok(())
    }
}

/// A `[0, 1]`-valued bandit distance evaluated on the current statistics.
///
/// Implement this to plug new distances into [`super::select_arm`].
pub trait Distance {
    fn distance(&self, state: &PolicyState, i: usize, j: usize) -> Result<f64>;

    /// True when the distance is the "no distance" marker of plain UCB, in
    /// which case effective counts are the raw counts and no means are read.
    fn is_plain_ucb(&self) -> bool {
        false
    }
}

impl Distance for DistanceSpec {
    fn distance(&self, state: &PolicyState, i: usize, j: usize) -> Result<f64> {
        match self.kind {
            DistanceKind::None => Ok(0.0),
            DistanceKind::Mu => distance_mu(state, i, j, self.gamma),
            DistanceKind::MuMargin => distance_mu_margin(state, i, j, self.gamma, self.margin),
            DistanceKind::ThenCommit => distance_then_commit(state, i, j, self.gamma),
        }
    }

    fn is_plain_ucb(&self) -> bool {
        self.kind == DistanceKind::None
    }
}

/// `base^(1/⌊γ·n⌋)` with `base` clamped to `[0, 1]`.
///
/// The distance is 0 while `⌊γ·n⌋ = 0`, whatever the base. Gaussian mean
/// gaps often exceed 1 after a handful of pulls; saturating them to 1 there
/// would freeze arms before they are explored.
pub fn powered_gap(base: f64, n_i: u64, gamma: f64) -> f64 {
    let base = base.clamp(0.0, 1.0);
    let floor = (gamma * n_i as f64).floor();
    if floor < 1.0 {
        return 0.0;
    }
    base.powf(1.0 / floor).clamp(0.0, 1.0)
}

fn mean_gap(state: &PolicyState, i: usize, j: usize) -> Result<f64> {
    Ok((state.mean(i)? - state.mean(j)?).abs())
}

/// `|μ̂_i − μ̂_j|^(1/⌊γ·N_i⌋)`.
pub fn distance_mu(state: &PolicyState, i: usize, j: usize, gamma: f64) -> Result<f64> {
    Ok(powered_gap(mean_gap(state, i, j)?, state.count(i), gamma))
}

/// `max(|μ̂_i − μ̂_j| − m, 0)^(1/⌊γ·N_i⌋)`.
pub fn distance_mu_margin(state: &PolicyState, i: usize, j: usize, gamma: f64, margin: f64) -> Result<f64> {
    let base = (mean_gap(state, i, j)? - margin).max(0.0);
    Ok(powered_gap(base, state.count(i), gamma))
}

/// Step from 0 to 1 once `N_i` exceeds `⌊1/γ⌋`.
pub fn commit_step(n_i: u64, gamma: f64) -> f64 {
    if n_i as f64 <= (1.0 / gamma).floor() {
        0.0
    } else {
        1.0
    }
}

pub fn distance_then_commit(state: &PolicyState, i: usize, j: usize, gamma: f64) -> Result<f64> {
    state.check_arm(i)?;
    state.check_arm(j)?;
    Ok(commit_step(state.count(i), gamma))
}

/// Tabulates the `Mu` distance for `N = 1..=n_max` at a fixed mean gap.
pub fn distance_profile(gamma: f64, mean_gap: f64, n_max: u64) -> Result<Vec<(u64, f64)>> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidDistance(format!("gamma must be > 0, got {gamma}")));
    }
    if !(0.0..=1.0).contains(&mean_gap) {
        return Err(Error::InvalidDistance(format!("mean gap must lie in [0, 1], got {mean_gap}")));
    }
    if n_max < 1 {
        return Err(Error::InvalidDistance("n_max must be >= 1".into()));
    }
    Ok((1..=n_max).map(|n| (n, powered_gap(mean_gap, n, gamma))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(counts: &[u64], means: &[f64]) -> PolicyState {
        PolicyState::with_means(counts.to_vec(), means.to_vec()).unwrap()
    }

    #[test]
    fn mu_examples() {
        let s = state(&[100, 10], &[0.9, 0.7]);
        // oracle: 0.2^(1/2), gap formed from the stored means
        let want = (0.9f64 - 0.7).sqrt();
        assert!((distance_mu(&s, 0, 1, 0.02).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.447_213_6).abs() < 1e-7);
        // ⌊0.02·10⌋ = 0
        assert_eq!(distance_mu(&s, 1, 0, 0.02).unwrap(), 0.0);

        let eq = state(&[100, 100], &[0.4, 0.4]);
        assert_eq!(distance_mu(&eq, 0, 1, 0.02).unwrap(), 0.0);

        let extreme = state(&[100, 5], &[1.0, 0.0]);
        assert_eq!(distance_mu(&extreme, 0, 1, 0.02).unwrap(), 1.0);
    }

    #[test]
    fn mu_requires_pulled_arms() {
        let s = state(&[3, 0], &[0.5, 0.0]);
        assert!(matches!(distance_mu(&s, 0, 1, 0.02), Err(Error::UndefinedMean { arm: 1 })));
        assert!(matches!(DistanceSpec::mu(0.02).unwrap().distance(&s, 1, 0), Err(Error::UndefinedMean { arm: 1 })));
    }

    #[test]
    fn floor_zero_convention() {
        assert_eq!(powered_gap(0.3, 49, 0.02), 0.0);
        assert_eq!(powered_gap(1.0, 1, 0.02), 0.0);
        assert_eq!(powered_gap(1.7, 49, 0.02), 0.0);
        // saturated gap clamps to 1 before exponentiation
        assert_eq!(powered_gap(1.7, 50, 0.02), 1.0);
        assert_eq!(powered_gap(1.7, 200, 0.02), 1.0);
    }

    #[test]
    fn margin_examples() {
        let s = state(&[100, 100], &[0.75, 0.5]);
        let want = (0.25f64 - 0.05).sqrt();
        assert!((distance_mu_margin(&s, 0, 1, 0.02, 0.05).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.447_213_6).abs() < 1e-7);

        let close = state(&[1000, 1000], &[0.5, 0.47]);
        assert_eq!(distance_mu_margin(&close, 0, 1, 0.02, 0.05).unwrap(), 0.0);
    }

    #[test]
    fn then_commit_examples() {
        let s = state(&[50, 51, 0], &[0.1, 0.2, 0.0]);
        assert_eq!(distance_then_commit(&s, 0, 1, 0.02).unwrap(), 0.0);
        assert_eq!(distance_then_commit(&s, 1, 0, 0.02).unwrap(), 1.0);
        assert_eq!(distance_then_commit(&s, 2, 0, 1.0).unwrap(), 0.0);
        assert!(distance_then_commit(&s, 3, 0, 1.0).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(DistanceSpec::mu(0.0).is_err());
        assert!(DistanceSpec::mu(-1.0).is_err());
        assert!(DistanceSpec::mu(f64::NAN).is_err());
        assert!(DistanceSpec::mu_margin(0.02, 1.0).is_err());
        assert!(DistanceSpec::mu_margin(0.02, -0.1).is_err());
        assert!(DistanceSpec::mu_margin(0.02, 0.0).is_ok());
    }

    #[test]
    fn policy_names_round_trip() {
        for kind in DistanceKind::ALL {
            assert_eq!(kind.policy_name().parse::<DistanceKind>().unwrap(), kind);
        }
        assert!("kl-ucb".parse::<DistanceKind>().is_err());
    }

    #[test]
    fn profile_steps() {
        let profile = distance_profile(0.02, 0.2, 300).unwrap();
        assert_eq!(profile.len(), 300);
        assert_eq!(profile[48], (49, 0.0));
        assert!((profile[99].1 - 0.2f64.sqrt()).abs() < 1e-15);
        for w in profile.windows(2) {
            assert!(w[1].1 >= w[0].1);
            if w[1].1 != w[0].1 {
                assert_eq!(w[1].0 % 50, 0, "step at {}", w[1].0);
            }
        }
        assert!(distance_profile(0.0, 0.2, 10).is_err());
        assert!(distance_profile(0.02, 1.2, 10).is_err());
        assert!(distance_profile(0.02, 0.2, 0).is_err());
    }

    proptest! {
        #[test]
        fn distances_in_unit_interval(
            mi in -3.0f64..3.0, mj in -3.0f64..3.0,
            ni in 1u64..5000, nj in 1u64..5000,
            gamma in 1e-4f64..2.0, margin in 0.0f64..0.99,
        ) {
            let s = state(&[ni, nj], &[mi, mj]);
            for spec in [
                DistanceSpec::mu(gamma).unwrap(),
                DistanceSpec::mu_margin(gamma, margin).unwrap(),
                DistanceSpec::then_commit(gamma).unwrap(),
                DistanceSpec::ucb(),
            ] {
                for (i, j) in [(0, 1), (1, 0)] {
                    let d = spec.distance(&s, i, j).unwrap();
                    prop_assert!((0.0..=1.0).contains(&d), "{:?} -> {}", spec, d);
                }
            }
        }

        #[test]
        fn zero_margin_matches_mu(mi in -2.0f64..2.0, mj in -2.0f64..2.0, ni in 1u64..3000, gamma in 1e-3f64..1.0) {
            let s = state(&[ni, 1], &[mi, mj]);
            prop_assert_eq!(
                distance_mu_margin(&s, 0, 1, gamma, 0.0).unwrap().to_bits(),
                distance_mu(&s, 0, 1, gamma).unwrap().to_bits()
            );
        }

        #[test]
        fn mu_nondecreasing_in_pulls(gap in 0.001f64..0.999, gamma in 1e-3f64..0.5, n in 1u64..10_000) {
            prop_assert!(powered_gap(gap, n + 1, gamma) >= powered_gap(gap, n, gamma));
        }
    }
}

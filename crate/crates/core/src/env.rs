//! Reward distributions, seeded reward streams and the preset environments.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Random stream owned by a single simulation run.
///
/// ChaCha8 is counter based, so a stream is fully determined by its 64-bit
/// seed and the number of draws taken from it.
pub type RewardStream = ChaCha8Rng;

/// Stream for simulation `index` of a batch seeded with `base_seed`.
///
/// The derivation `base_seed ^ index` is part of the reproducibility
/// contract; golden outputs depend on it.
pub fn reward_stream(base_seed: u64, index: u64) -> RewardStream {
    ChaCha8Rng::seed_from_u64(base_seed ^ index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArmKind {
    Bernoulli,
    Gaussian,
}

/// Reward law of one arm: Bernoulli(p) or a unit-variance Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArm", into = "RawArm")]
pub struct ArmDistribution {
    kind: ArmKind,
    mean: f64,
}

#[derive(Serialize, Deserialize)]
struct RawArm {
    kind: ArmKind,
    mean: f64,
}

impl TryFrom<RawArm> for ArmDistribution {
    type Error = Error;

    fn try_from(raw: RawArm) -> Result<Self> {
        match raw.kind {
            ArmKind::Bernoulli => Self::bernoulli(raw.mean),
            ArmKind::Gaussian => Self::gaussian(raw.mean),
        }
    }
}

impl From<ArmDistribution> for RawArm {
    fn from(arm: ArmDistribution) -> Self {
        RawArm { kind: arm.kind, mean: arm.mean }
    }
}

impl ArmDistribution {
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArm(format!("Bernoulli mean {p} outside [0, 1]")));
        }
        Ok(Self { kind: ArmKind::Bernoulli, mean: p })
    }

    pub fn gaussian(mean: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidArm(format!("Gaussian mean {mean} is not finite")));
        }
        Ok(Self { kind: ArmKind::Gaussian, mean })
    }

    pub fn kind(&self) -> ArmKind {
        self.kind
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        match self.kind {
            ArmKind::Bernoulli => self.mean * (1.0 - self.mean),
            ArmKind::Gaussian => 1.0,
        }
    }

    /// Draws one reward.
    ///
    /// Bernoulli uses a single uniform `u ∈ [0, 1)` and returns `1` iff
    /// `u < p`, so `p = 0` and `p = 1` are exact. Gaussian deviates come from
    /// `rand_distr::StandardNormal` (ziggurat), shifted by the mean. The
    /// ziggurat occasionally draws more than once; replay is still exact.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            ArmKind::Bernoulli => {
                if rng.random::<f64>() < self.mean {
                    1.0
                } else {
                    0.0
                }
            }
            ArmKind::Gaussian => {
                let z: f64 = rng.sample(StandardNormal);
                self.mean + z
            }
        }
    }
}

pub fn sample_reward<R: Rng + ?Sized>(arm: &ArmDistribution, rng: &mut R) -> f64 {
    arm.sample(rng)
}

/// An ordered set of arms with its optimal mean and per-arm gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    arms: Vec<ArmDistribution>,
    optimal_arm: usize,
    optimal_mean: f64,
    gaps: Vec<f64>,
}

impl Environment {
    pub fn new(arms: Vec<ArmDistribution>) -> Result<Self> {
        if arms.len() < 2 {
            return Err(Error::InvalidEnvironment(format!("need at least 2 arms, got {}", arms.len())));
        }
        // Lowest index wins ties.
        let mut optimal_arm = 0;
        for (i, arm) in arms.iter().enumerate() {
            if arm.mean > arms[optimal_arm].mean {
                optimal_arm = i;
            }
        }
        let optimal_mean = arms[optimal_arm].mean;
        let gaps = arms.iter().map(|a| optimal_mean - a.mean).collect();
        Ok(Self { arms, optimal_arm, optimal_mean, gaps })
    }

    pub fn bernoulli(means: &[f64]) -> Result<Self> {
        Self::new(means.iter().map(|&p| ArmDistribution::bernoulli(p)).collect::<Result<_>>()?)
    }

    pub fn gaussian(means: &[f64]) -> Result<Self> {
        Self::new(means.iter().map(|&m| ArmDistribution::gaussian(m)).collect::<Result<_>>()?)
    }

    pub fn arms(&self) -> &[ArmDistribution] {
        &self.arms
    }

    pub fn n_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn optimal_arm(&self) -> usize {
        self.optimal_arm
    }

    pub fn optimal_mean(&self) -> f64 {
        self.optimal_mean
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmDistribution::mean).collect()
    }

    /// Smallest strictly positive gap, if any arm is suboptimal.
    pub fn min_positive_gap(&self) -> Option<f64> {
        self.gaps.iter().copied().filter(|&g| g > 0.0).reduce(f64::min)
    }
}

pub fn suboptimality_gaps(env: &Environment) -> Vec<f64> {
    env.gaps.clone()
}

/// The six benchmark environments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    B5,
    B20,
    BLow,
    BClose,
    N5,
    N20,
}

const B5_MEANS: [f64; 5] = [0.9, 0.8, 0.7, 0.2, 0.5];
const B20_MEANS: [f64; 20] =
    [0.9, 0.85, 0.8, 0.8, 0.7, 0.65, 0.6, 0.6, 0.55, 0.5, 0.4, 0.4, 0.35, 0.3, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05];
const B_LOW_MEANS: [f64; 3] = [0.05, 0.02, 0.01];
const B_CLOSE_MEANS: [f64; 2] = [0.9, 0.88];
const N5_MEANS: [f64; 5] = [1.0, 0.8, 0.5, 0.3, -0.2];
const N20_MEANS: [f64; 20] = [
    0.0, -0.03, -0.03, -0.07, -0.07, -0.07, -0.15, -0.15, -0.15, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5,
    -1.0, -1.0,
];

impl Preset {
    pub const ALL: [Preset; 6] = [Preset::B5, Preset::B20, Preset::BLow, Preset::BClose, Preset::N5, Preset::N20];

    /// Shell-safe identifier used by the CLI and in CSV output.
    pub fn id(self) -> &'static str {
        match self {
            Preset::B5 => "B5",
            Preset::B20 => "B20",
            Preset::BLow => "B0.02-0.01",
            Preset::BClose => "B0.9-0.88",
            Preset::N5 => "N5",
            Preset::N20 => "N20",
        }
    }

    /// Name as written in the experiment tables.
    pub fn label(self) -> &'static str {
        match self {
            Preset::B5 => "B5",
            Preset::B20 => "B20",
            Preset::BLow => "B(0.02, 0.01)",
            Preset::BClose => "B(0.9, 0.88)",
            Preset::N5 => "N5",
            Preset::N20 => "N20",
        }
    }

    pub fn means(self) -> &'static [f64] {
        match self {
            Preset::B5 => &B5_MEANS,
            Preset::B20 => &B20_MEANS,
            Preset::BLow => &B_LOW_MEANS,
            Preset::BClose => &B_CLOSE_MEANS,
            Preset::N5 => &N5_MEANS,
            Preset::N20 => &N20_MEANS,
        }
    }

    pub fn kind(self) -> ArmKind {
        match self {
            Preset::N5 | Preset::N20 => ArmKind::Gaussian,
            _ => ArmKind::Bernoulli,
        }
    }

    pub fn environment(self) -> Environment {
        let env = match self.kind() {
            ArmKind::Bernoulli => Environment::bernoulli(self.means()),
            ArmKind::Gaussian => Environment::gaussian(self.means()),
        };
        env.expect("preset means are valid")
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Accepts both `B(0.9, 0.88)` and the shell-safe `B0.9-0.88`.
fn normalize_preset_name(name: &str) -> String {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.strip_prefix("B(").and_then(|s| s.strip_suffix(')')) {
        Some(inner) => match inner.split_once(',') {
            Some((a, b)) => format!("B{a}-{b}"),
            None => compact,
        },
        None => compact,
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(name: &str) -> Result<Self> {
        let normalized = normalize_preset_name(name);
        Preset::ALL.into_iter().find(|p| p.id().eq_ignore_ascii_case(&normalized)).ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            valid: Preset::ALL.map(Preset::id).join(", "),
        })
    }
}

pub fn make_preset(name: &str) -> Result<Environment> {
    Ok(name.parse::<Preset>()?.environment())
}

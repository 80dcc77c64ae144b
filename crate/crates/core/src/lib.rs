//! Stochastic multi-armed bandit laboratory.
//!
//! * [`env`]: Bernoulli and unit-variance Gaussian arms, seeded reward
//!   streams and the six benchmark environments.
//! * [`policies`]: UCB and the distance-tuned UCB-DT family.
//! * [`bargain`]: two-armed exploration analysis (full point, bargain point,
//!   optimal exploration budget, recommended speed parameter).
//! * [`sim`]: seeded Monte-Carlo batches with pseudo-regret accounting.
//! * [`cli`]: the `bandit-lab` command line.

pub mod bargain;
pub mod cli;
pub mod env;
pub mod error;
pub mod lambert;
pub mod policies;
pub mod sim;

pub use error::{Error, Result};

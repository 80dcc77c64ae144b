//! Index policies: UCB and the distance-tuned UCB-DT family.

mod distance;
mod state;
mod ucb;

pub use distance::{
    commit_step, distance_mu, distance_mu_margin, distance_profile, distance_then_commit, powered_gap, Distance,
    DistanceKind, DistanceSpec, DEFAULT_GAMMA, DEFAULT_MARGIN,
};
pub use state::{update_state, PolicyState};
pub use ucb::{
    argmax_lowest, confidence_radius, effective_counts, select_arm, CachedUcbDt, DistancePolicy, Policy, Selection,
};

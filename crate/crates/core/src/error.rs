use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown preset `{name}` (valid: {valid})")]
    UnknownPreset { name: String, valid: String },

    #[error("unknown policy `{name}` (valid: ucb, ucb-dt-mu, ucb-dt-mu-margin, ucb-then-commit)")]
    UnknownPolicy { name: String },

    #[error("invalid arm: {0}")]
    InvalidArm(String),

    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    #[error("invalid distance parameters: {0}")]
    InvalidDistance(String),

    #[error("empirical mean of arm {arm} is undefined (arm never pulled)")]
    UndefinedMean { arm: usize },

    #[error("arm index {arm} out of range for {n_arms} arms")]
    ArmOutOfRange { arm: usize, n_arms: usize },

    #[error("length mismatch: {left} counts vs {right} gaps")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("exploration budget exceeds horizon: n_full = {n_full} >= T = {horizon}")]
    Infeasible { n_full: f64, horizon: u64 },

    #[error("no sign change of the bargain residual found in (0, {n_full}]")]
    NoRoot { n_full: f64 },
}

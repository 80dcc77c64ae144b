use std::path::PathBuf;

use serde::Deserialize;

use super::args::{ExperimentArgs, Format};
use super::CliError;
use crate::policies::{DistanceKind, DistanceSpec, DEFAULT_GAMMA, DEFAULT_MARGIN};
use crate::sim::{DEFAULT_HORIZON, DEFAULT_LOG_POINTS, DEFAULT_SIMS};

pub const SEED_ENV_VAR: &str = "BANDIT_LAB_SEED";

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Flat JSON mirror of the experiment flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    env: Option<OneOrMany>,
    policy: Option<OneOrMany>,
    gamma: Option<f64>,
    margin: Option<f64>,
    horizon: Option<u64>,
    sims: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    log_points: Option<usize>,
}

/// Splits comma-separated lists, ignoring commas inside parentheses so that
/// `B(0.9, 0.88)` stays one item.
pub fn split_list(values: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for value in values {
        let mut depth = 0usize;
        let mut current = String::new();
        for c in value.chars() {
            match c {
                '(' => {
                    depth += 1;
                    current.push(c);
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    current.push(c);
                }
                ',' if depth == 0 => out.push(std::mem::take(&mut current)),
                _ => current.push(c),
            }
        }
        out.push(current);
    }
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// Experiment options after merging flags, config file and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub envs: Vec<String>,
    pub policies: Vec<DistanceSpec>,
    pub horizon: u64,
    pub sims: u64,
    pub seed: u64,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub log_points: usize,
}

impl Resolved {
    /// Precedence: flag, then config file, then `BANDIT_LAB_SEED` (seed
    /// only), then built-in defaults.
    pub fn from_args(args: &ExperimentArgs, seed_env: Option<&str>, default_format: Format) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(CliError::io(format!("cannot read config {}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };

        let envs =
            if args.env.is_empty() { file.env.map(OneOrMany::into_vec).unwrap_or_default() } else { args.env.clone() };
        let envs = split_list(&envs);
        if envs.is_empty() {
            return Err(CliError::Usage("at least one --env is required".into()));
        }

        let policies = if args.policy.is_empty() {
            file.policy.map(OneOrMany::into_vec).unwrap_or_default()
        } else {
            args.policy.clone()
        };
        let policies = split_list(&policies);
        if policies.is_empty() {
            return Err(CliError::Usage("at least one --policy is required".into()));
        }

        let gamma = args.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA);
        let margin = args.margin.or(file.margin).unwrap_or(DEFAULT_MARGIN);
        let policies = policies
            .iter()
            .map(|name| {
                let kind: DistanceKind = name.parse()?;
                DistanceSpec::new(kind, gamma, margin)
            })
            .collect::<crate::Result<Vec<_>>>()
            .map_err(|e| CliError::Usage(e.to_string()))?;

        let seed = match args.seed.or(file.seed) {
            Some(seed) => seed,
            None => match seed_env {
                Some(raw) => {
                    raw.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV_VAR} is not a u64: {raw:?}")))?
                }
                None => 0,
            },
        };

        let sims = args.sims.or(file.sims).unwrap_or(DEFAULT_SIMS);
        if sims == 0 {
            return Err(CliError::Usage("--sims must be >= 1".into()));
        }
        let log_points = args.log_points.or(file.log_points).unwrap_or(DEFAULT_LOG_POINTS);
        if log_points == 0 {
            return Err(CliError::Usage("--log-points must be >= 1".into()));
        }
        let workers = args.workers.or(file.workers);
        if workers == Some(0) {
            return Err(CliError::Usage("--workers must be >= 1".into()));
        }

        Ok(Resolved {
            envs,
            policies,
            horizon: args.horizon.or(file.horizon).unwrap_or(DEFAULT_HORIZON),
            sims,
            seed,
            workers,
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or(default_format),
            log_points,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn args(env: &[&str], policy: &[&str]) -> ExperimentArgs {
        ExperimentArgs {
            env: env.iter().map(|s| s.to_string()).collect(),
            policy: policy.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    #[test]
    fn splits_outside_parentheses() {
        let items = split_list(&["B(0.9, 0.88),B5".into(), "N5".into()]);
        assert_eq!(items, vec!["B(0.9, 0.88)", "B5", "N5"]);
        assert_eq!(split_list(&["ucb, ucb-dt-mu,".into()]), vec!["ucb", "ucb-dt-mu"]);
    }

    #[test]
    fn defaults() {
        let r = Resolved::from_args(&args(&["B5"], &["ucb-dt-mu"]), None, Format::Csv).unwrap();
        assert_eq!(r.horizon, 20_000);
        assert_eq!(r.sims, 2000);
        assert_eq!(r.seed, 0);
        assert_eq!(r.policies[0].gamma, 0.02);
        assert_eq!(r.policies[0].margin, 0.05);
    }

    #[test]
    fn seed_precedence() {
        let mut a = args(&["B5"], &["ucb"]);
        assert_eq!(Resolved::from_args(&a, Some("17"), Format::Csv).unwrap().seed, 17);
        a.seed = Some(3);
        assert_eq!(Resolved::from_args(&a, Some("17"), Format::Csv).unwrap().seed, 3);
        a.seed = None;
        assert!(Resolved::from_args(&a, Some("x"), Format::Csv).is_err());
    }

    #[test]
    fn config_file_and_flag_override() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, r#"{{"env": ["B5", "N5"], "policy": "ucb-dt-mu", "gamma": 0.05, "seed": 9, "sims": 4}}"#).unwrap();
        let mut a = ExperimentArgs { config: Some(file.path().to_path_buf()), ..Default::default() };
        let r = Resolved::from_args(&a, Some("17"), Format::Csv).unwrap();
        assert_eq!(r.envs, vec!["B5", "N5"]);
        assert_eq!(r.policies[0].gamma, 0.05);
        assert_eq!(r.seed, 9);
        assert_eq!(r.sims, 4);
        a.gamma = Some(0.1);
        a.env = vec!["B20".into()];
        let r = Resolved::from_args(&a, None, Format::Csv).unwrap();
        assert_eq!(r.policies[0].gamma, 0.1);
        assert_eq!(r.envs, vec!["B20"]);
    }

    #[test]
    fn unknown_config_key_rejected() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, r#"{{"env": "B5", "policy": "ucb", "speed": 1}}"#).unwrap();
        let a = ExperimentArgs { config: Some(file.path().to_path_buf()), ..Default::default() };
        assert!(matches!(Resolved::from_args(&a, None, Format::Csv), Err(CliError::Usage(_))));
    }

    #[test]
    fn usage_errors() {
        assert!(Resolved::from_args(&args(&[], &["ucb"]), None, Format::Csv).is_err());
        assert!(Resolved::from_args(&args(&["B5"], &[]), None, Format::Csv).is_err());
        assert!(Resolved::from_args(&args(&["B5"], &["thompson"]), None, Format::Csv).is_err());
        let mut a = args(&["B5"], &["ucb-dt-mu"]);
        a.gamma = Some(0.0);
        assert!(Resolved::from_args(&a, None, Format::Csv).is_err());
    }
}

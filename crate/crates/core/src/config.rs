use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::team::{TeamId, TEAM_COUNT};

/// How the 16 play-off entrants are arranged into four paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathPolicy {
    /// League-based paths; group winners never meet a higher-league team.
    #[default]
    Regular,
    /// Uniform random partition into four paths.
    Random,
    /// One team from each quartile of the overall ranking per path.
    Seeded,
}

impl PathPolicy {
    pub const ALL: [PathPolicy; 3] = [PathPolicy::Regular, PathPolicy::Random, PathPolicy::Seeded];

    pub fn as_str(self) -> &'static str {
        match self {
            PathPolicy::Regular => "regular",
            PathPolicy::Random => "random",
            PathPolicy::Seeded => "seeded",
        }
    }
}

impl fmt::Display for PathPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PathPolicy {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "regular" => Ok(PathPolicy::Regular),
            "random" => Ok(PathPolicy::Random),
            "seeded" => Ok(PathPolicy::Seeded),
            other => Err(ConfigError::UnknownPolicy(other.to_string())),
        }
    }
}

/// Move `subject` to coefficient rank `target_rank` by swapping with its occupant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterfactual {
    pub subject: TeamId,
    pub target_rank: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Scale of the logistic win expectancy, in rating points.
    pub scale: f64,
    /// Rating bonus for the team playing at home.
    pub home_advantage: f64,
    pub iterations: u64,
    pub master_seed: u64,
    pub path_policy: PathPolicy,
    pub counterfactual: Option<Counterfactual>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scale: 400.0,
            home_advantage: 100.0,
            iterations: 1_000_000,
            master_seed: 2020,
            path_policy: PathPolicy::Regular,
            counterfactual: None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("scale parameter must be positive and finite, got {0}")]
    Scale(f64),
    #[error("home advantage must be non-negative and finite, got {0}")]
    HomeAdvantage(f64),
    #[error("iterations must be at least 1")]
    Iterations,
    #[error("target rank {0} is outside 1..=55")]
    TargetRank(u8),
    #[error("unknown path policy {0:?} (expected regular, random or seeded)")]
    UnknownPolicy(String),
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(ConfigError::Scale(self.scale));
        }
        if !(self.home_advantage.is_finite() && self.home_advantage >= 0.0) {
            return Err(ConfigError::HomeAdvantage(self.home_advantage));
        }
        if self.iterations == 0 {
            return Err(ConfigError::Iterations);
        }
        if let Some(cf) = self.counterfactual {
            if !(1..=TEAM_COUNT as u8).contains(&cf.target_rank) {
                return Err(ConfigError::TargetRank(cf.target_rank));
            }
        }
        Ok(())
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn with_policy(mut self, path_policy: PathPolicy) -> Self {
        self.path_policy = path_policy;
        self
    }
}

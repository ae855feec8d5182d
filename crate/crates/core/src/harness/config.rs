use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer};
use thiserror::Error;

use crate::schemes::{ModelSpec, SchemeKind};
use crate::simulator::PairSampler;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("scheme {kind} does not support model {model}")]
    IllegalModel { kind: SchemeKind, model: ModelSpec },
    #[error("{0}")]
    Invalid(String),
}

/// A builder together with the model it runs under, written `name` or
/// `name:model` (for example `sp_neighbor_known:IB-alpha`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub model: ModelSpec,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind, model: ModelSpec) -> Result<Self, ConfigError> {
        if kind.legal_models().contains(&model) {
            Ok(SchemeSpec { kind, model })
        } else {
            Err(ConfigError::IllegalModel { kind, model })
        }
    }

    pub fn default_for(kind: SchemeKind) -> Self {
        SchemeSpec {
            kind,
            model: kind.default_model(),
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.model)
    }
}

impl FromStr for SchemeSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, model) = match s.split_once(':') {
            Some((name, model)) => (name, Some(model)),
            None => (s, None),
        };
        let kind: SchemeKind = name.trim().parse().map_err(ConfigError::Invalid)?;
        match model {
            None => Ok(SchemeSpec::default_for(kind)),
            Some(m) => SchemeSpec::new(kind, m.trim().parse().map_err(ConfigError::Invalid)?),
        }
    }
}

impl<'de> Deserialize<'de> for SchemeSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn default_c() -> u32 {
    3
}

fn default_retries() -> u32 {
    5
}

/// An experiment grid: every scheme on every `(n, seed)` graph.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_c")]
    pub c: u32,
    #[serde(default)]
    pub schemes: Vec<SchemeSpec>,
    /// Pairs routed per scheme; all pairs up to 256 nodes and `10^5`
    /// sampled pairs above when absent.
    #[serde(default)]
    pub pairs: Option<PairSampler>,
    /// Graphs drawn per seed slot before giving up on the lemma checks.
    #[serde(default = "default_retries")]
    pub max_attempts: u32,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_values.iter().any(|&n| n < 4) {
            return Err(ConfigError::Invalid("every n must be at least 4".into()));
        }
        if self.max_attempts == 0 {
            return Err(ConfigError::Invalid("max_attempts must be positive".into()));
        }
        for spec in &self.schemes {
            SchemeSpec::new(spec.kind, spec.model)?;
        }
        Ok(())
    }
}

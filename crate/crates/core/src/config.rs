//! Run configuration: sectioned `key = value` text (TOML).
//!
//! Every key has a pinned default from `config/default.toml`, which is
//! compiled into the crate. A user file only needs the keys it changes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cim::SolverParams;
use crate::error::{Error, Result};

/// The pinned default configuration text.
pub const DEFAULT_CONFIG: &str = include_str!("../config/default.toml");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub cim: SolverParams,
    pub anneal: AnnealSection,
    pub tap: TapSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealSection {
    /// Starting temperature; defaults to the model's largest local field.
    #[serde(default)]
    pub t_start: Option<f64>,
    pub t_end_ratio: f64,
    pub n_sweeps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TapSection {
    pub group_size: f64,
    pub routes_per_group: usize,
    pub yen_k: usize,
    pub fw_max_iters: usize,
    pub dia_trials: usize,
    pub two_step: bool,
    /// Penalty override; computed from the instance when unset.
    #[serde(default)]
    pub lambda: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::parse(DEFAULT_CONFIG).expect("bundled default config is valid")
    }
}

impl RunConfig {
    /// Parses a full configuration.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::input(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Layers a partial configuration file over the defaults.
    pub fn with_overrides(text: &str) -> Result<Self> {
        let mut base: toml::Table = toml::from_str(DEFAULT_CONFIG).expect("valid default config");
        let user: toml::Table = toml::from_str(text).map_err(|e| Error::input(format!("config: {e}")))?;
        for (section, value) in user {
            match (base.get_mut(&section), value) {
                (Some(toml::Value::Table(dst)), toml::Value::Table(src)) => {
                    dst.extend(src);
                }
                (_, _) => return Err(Error::input(format!("config: unknown section `{section}`"))),
            }
        }
        let cfg: RunConfig = base
            .try_into()
            .map_err(|e: toml::de::Error| Error::input(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::with_overrides(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.cim.validate()?;
        if self.run.trials == 0 {
            return Err(Error::input("trials must be at least 1"));
        }
        if !(self.tap.group_size > 0.0 && self.tap.group_size.is_finite()) {
            return Err(Error::input("group_size must be positive"));
        }
        if self.tap.routes_per_group == 0 {
            return Err(Error::input("routes_per_group must be at least 1"));
        }
        if !(self.anneal.t_end_ratio > 0.0 && self.anneal.t_end_ratio < 1.0) {
            return Err(Error::input("t_end_ratio must lie in (0, 1)"));
        }
        if let Some(l) = self.tap.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::input("lambda must be positive"));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

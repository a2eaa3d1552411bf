//! Experiment configuration: a TOML file whose keys can each be overridden by
//! the command-line flag of the same name.

use std::path::Path;

use clap::ValueEnum;
use erw_core::harness::DEFAULT_SEED;
use erw_core::WalkParams;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Memory parameter. No default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// First-step bias. No default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Horizon.
    #[serde(default = "default_n")]
    pub n: u64,
    /// Ensemble size.
    #[serde(default = "default_paths")]
    pub paths: u64,
    /// Base seed; path `i` uses substream `i` of it.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Named checks run by `verify`.
    #[serde(default)]
    pub tests: Vec<String>,
    #[serde(default = "default_format")]
    pub format: Format,
    /// Output path, `-` for standard output.
    #[serde(default = "default_out")]
    pub out: String,
    /// Worker threads, 0 for one per core.
    #[serde(default)]
    pub threads: usize,
}

fn default_n() -> u64 {
    1000
}

fn default_paths() -> u64 {
    1000
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_format() -> Format {
    Format::Csv
}

fn default_out() -> String {
    "-".into()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p: None,
            q: None,
            n: default_n(),
            paths: default_paths(),
            seed: default_seed(),
            tests: Vec::new(),
            format: default_format(),
            out: default_out(),
            threads: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("config cannot be written as TOML: {e}")))
    }

    /// TOML integers are signed 64-bit, so larger seeds would not round-trip.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.seed > i64::MAX as u64 {
            return Err(CliError::Usage(format!("seed must be at most {}", i64::MAX)));
        }
        if self.paths == 0 {
            return Err(CliError::Usage("paths must be at least 1".into()));
        }
        Ok(())
    }

    pub fn require_p(&self) -> Result<f64, CliError> {
        self.p.ok_or_else(|| CliError::Usage("p is required (config key or --p)".into()))
    }

    pub fn require_q(&self) -> Result<f64, CliError> {
        self.q.ok_or_else(|| CliError::Usage("q is required (config key or --q)".into()))
    }

    pub fn walk_params(&self) -> Result<WalkParams, CliError> {
        Ok(WalkParams::new(self.require_p()?, self.require_q()?, self.n, self.seed)?)
    }
}

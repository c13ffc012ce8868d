//! Run configuration: one TOML file with a `[model]` block plus one block
//! per command. Unknown keys anywhere are hard errors, so typos in
//! experiment definitions fail loudly instead of being ignored.

use std::path::Path;

use serde::Deserialize;

use crate::model::ModelParams;

use super::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    pub solve: Option<SolveConfig>,
    pub simulate: Option<SimulateConfig>,
    pub yule: Option<YuleConfig>,
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub x0: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            x0: 0.5,
            tolerance: 1e-9,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub n: usize,
    pub seed: u64,
    /// Yesterday's share on day zero. Drawn uniformly from the seed when
    /// omitted, which is how the randomized-start experiment is expressed.
    pub x0: Option<f64>,
    pub max_days: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YuleConfig {
    pub alpha: f64,
    pub steps: usize,
    pub seed: u64,
    pub s_min: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// One of: a, b1, b2, T0, gamma, eta, p_max.
    pub parameter: String,
    pub values: Vec<f64>,
}

/// Reads and validates a run configuration.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError {
        exit_code: 1,
        message: format!("cannot read config {}: {e}", path.display()),
    })?;
    let config: RunConfig = toml::from_str(&text).map_err(|e| CliError {
        exit_code: 1,
        message: format!("invalid config {}: {e}", path.display()),
    })?;
    config.model.validate().map_err(|e| CliError {
        exit_code: 1,
        message: format!("invalid [model] block: {e}"),
    })?;
    Ok(config)
}

//! Flat JSON configs. Precedence, lowest first: struct defaults, the config
//! file, `--set KEY=VALUE` overrides, then `--seed` and `--out`.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

fn one() -> u64 {
    1
}
fn yes() -> bool {
    true
}
fn default_out() -> String {
    "out".into()
}
fn default_trials_cut() -> u64 {
    200
}
fn default_trials_config() -> u64 {
    10_000
}
fn default_trials_perc() -> u64 {
    200
}
fn default_steps() -> u64 {
    1_000_000
}
fn default_validate_trials() -> u64 {
    10_000
}
fn default_source() -> String {
    "law".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub n: usize,
    pub beta: f64,
    /// Mean-degree coefficient; `E = target_total(c, n) / 2`. Exclusive with `edges`.
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub edges: Option<usize>,
    #[serde(default = "one")]
    pub samples: u64,
    #[serde(default)]
    pub burn_in: Option<u64>,
    #[serde(default)]
    pub thinning: Option<u64>,
    #[serde(default = "one")]
    pub replicas: u64,
    /// Keep every k-th step of the energy trace.
    #[serde(default = "one")]
    pub trace_stride: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out", skip_serializing)]
    pub out: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreesConfig {
    pub n: usize,
    pub c: f64,
    pub beta: f64,
    #[serde(default)]
    pub alpha1: Option<f64>,
    #[serde(default)]
    pub alpha2: Option<f64>,
    #[serde(default = "one")]
    pub samples: u64,
    /// `law` (conditioned degree law) or `ergm` (chain equilibrium).
    #[serde(default = "default_source")]
    pub source: String,
    #[serde(default)]
    pub burn_in: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out", skip_serializing)]
    pub out: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigModelConfig {
    /// Explicit degree sequence. Otherwise `n` with `k` (regular) or with
    /// `c` and `beta` (one draw from the conditioned degree law).
    #[serde(default)]
    pub degrees: Option<Vec<usize>>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default = "default_trials_config")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out", skip_serializing)]
    pub out: String,
}

/// Where a graph comes from: a file, a named family, or an ERG sample.
#[derive(Debug, Clone)]
pub struct GraphSource {
    pub graph: Option<String>,
    pub family: Option<String>,
    pub size: Option<usize>,
    pub n: Option<usize>,
    pub beta: Option<f64>,
    pub burn_in: Option<u64>,
}

macro_rules! graph_source {
    ($t:ty) => {
        impl $t {
            pub fn source(&self) -> GraphSource {
                GraphSource {
                    graph: self.graph.clone(),
                    family: self.family.clone(),
                    size: self.size,
                    n: self.n,
                    beta: self.beta,
                    burn_in: self.burn_in,
                }
            }
        }
    };
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutsConfig {
    pub c: f64,
    /// Edge-list file. Exclusive with `family` and with `n` + `beta`.
    #[serde(default)]
    pub graph: Option<String>,
    /// `complete`, `cycle`, `path` or `star`, sized by `size`.
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub size: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub burn_in: Option<u64>,
    #[serde(default = "default_trials_cut")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out", skip_serializing)]
    pub out: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralConfig {
    /// Needed only when the graph is an ERG sample.
    #[serde(default)]
    pub c: Option<f64>,
    /// Edge-list file. Exclusive with `family` and with `n` + `beta`.
    #[serde(default)]
    pub graph: Option<String>,
    /// `complete`, `cycle`, `path` or `star`, sized by `size`.
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub size: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub burn_in: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out", skip_serializing)]
    pub out: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResilienceConfig {
    pub n: usize,
    pub c: f64,
    pub beta: f64,
    pub p_grid: Vec<f64>,
    #[serde(default = "default_trials_perc")]
    pub trials: u64,
    #[serde(default = "yes")]
    pub coupled: bool,
    /// Also run the G(n, m) graph with the same edge count.
    #[serde(default = "yes")]
    pub baseline: bool,
    /// Taken from a cut profile of the sampled graph when absent.
    #[serde(default)]
    pub delta_tilde: Option<f64>,
    #[serde(default = "default_trials_cut")]
    pub cut_trials: u64,
    #[serde(default)]
    pub burn_in: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out", skip_serializing)]
    pub out: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    /// Chain steps per exact-law comparison.
    #[serde(default = "default_steps")]
    pub steps: u64,
    /// Monte-Carlo trials for the pairing and percolation checks.
    #[serde(default = "default_validate_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out", skip_serializing)]
    pub out: String,
}

graph_source!(CutsConfig);
graph_source!(SpectralConfig);

/// Parses `VALUE` as JSON, falling back to a plain string.
fn parse_override(raw: &str) -> CliResult<(String, Value)> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override {raw:?} is not KEY=VALUE")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(CliError::Config(format!("override {raw:?} has an empty key")));
    }
    let v = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.to_string()));
    Ok((key.to_string(), v))
}

pub fn load<C: DeserializeOwned>(
    file: Option<&Path>,
    overrides: &[String],
    seed: Option<u64>,
    out: Option<&PathBuf>,
) -> CliResult<C> {
    let mut map = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(m)) => m,
                Ok(_) => return Err(CliError::Config("config must be a JSON object".into())),
                Err(e) => return Err(CliError::Config(format!("{}: {e}", path.display()))),
            }
        }
        None => Map::new(),
    };
    for raw in overrides {
        let (k, v) = parse_override(raw)?;
        map.insert(k, v);
    }
    if let Some(s) = seed {
        map.insert("seed".into(), Value::from(s));
    }
    if let Some(o) = out {
        map.insert("out".into(), Value::from(o.display().to_string()));
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Config(e.to_string()))
}

//! The TOML run configuration. Every key is optional; command-line flags
//! override file values, and `config.resolved.toml` records what a run used.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "DIRTY_ENCODE_SEED";
pub const DEFAULT_SAMPLE_CAP: usize = 100_000;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub data: DataSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub benchmark: BenchmarkSection,
    #[serde(default)]
    pub learner: LearnerSection,
    #[serde(default)]
    pub external: ExternalSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub input: Option<PathBuf>,
    /// The dirty categorical column.
    pub column: Option<String>,
    pub target: Option<String>,
    pub task: Option<String>,
    pub categoricals: Option<Vec<String>>,
    pub numericals: Option<Vec<String>>,
    pub sample_cap: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

/// A reduction dimension, or `"full"` for the unreduced encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dim {
    N(usize),
    Full(FullTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FullTag {
    Full,
}

impl Dim {
    pub const FULL: Dim = Dim::Full(FullTag::Full);
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSection {
    pub methods: Option<Vec<String>>,
    pub reduce: Option<String>,
    pub d: Option<Vec<Dim>>,
    pub splits: Option<usize>,
    pub test_fraction: Option<f64>,
    pub center: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerSection {
    pub lambda_grid: Option<Vec<f64>>,
    pub reg_grid: Option<Vec<f64>>,
    pub folds: Option<usize>,
    pub class_weighting: Option<String>,
    pub max_iter: Option<usize>,
    pub step: Option<f64>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalSection {
    /// CSV of `method,split,row_id,prediction` to score alongside built-in methods.
    pub predictions: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Seed from the flag, then the config file, then `DIRTY_ENCODE_SEED`, then 0.
pub fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

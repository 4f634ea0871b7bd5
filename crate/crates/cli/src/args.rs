use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "dirtyenc", version, about = "Similarity encoding of dirty categorical columns")]
pub struct Cli {
    /// Only log warnings and errors.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode one column and save the fitted encoder.
    Encode(EncodeArgs),
    /// Run the split × method prediction benchmark.
    Benchmark(BenchmarkArgs),
    /// Histogram of pairwise similarities between distinct categories.
    Histogram(HistogramArgs),
    /// Number of distinct categories as a function of sample size.
    Cardinality(CardinalityArgs),
    /// Write a synthetic dirty corpus with its ground-truth entities.
    GenerateDirty(GenerateArgs),
    /// Describe a state file and check that it round-trips.
    Inspect(InspectArgs),
}

/// Input, column roles, seed and output directory.
#[derive(Debug, Clone, Default, Args)]
pub struct DataArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// The dirty categorical column.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
    /// regression, binary-clf or multiclass-clf; inferred when omitted.
    #[arg(long)]
    pub task: Option<String>,
    /// Other categorical column (one-hot encoded); repeatable.
    #[arg(long = "categorical")]
    pub categoricals: Vec<String>,
    /// Numerical column; repeatable.
    #[arg(long = "numerical")]
    pub numericals: Vec<String>,
    #[arg(long)]
    pub sample_cap: Option<usize>,
    /// Falls back to the config file, then DIRTY_ENCODE_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Encoder or method, e.g. `one_hot` or `similarity:ngram3@kmeans:100`.
    #[arg(long)]
    pub method: Option<String>,
    /// Shorthand for `--method similarity:<measure>`.
    #[arg(long)]
    pub measure: Option<String>,
    /// none, projection, most_frequent, kmeans or dedup_merge.
    #[arg(long)]
    pub reduce: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Transform with a saved encoder instead of fitting one.
    #[arg(long)]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Method to compare; repeatable. Defaults to the standard panel.
    #[arg(long = "method")]
    pub methods: Vec<String>,
    /// Adds `similarity:<measure>`; repeatable.
    #[arg(long = "measure")]
    pub measures: Vec<String>,
    /// Sweep this reduction over `--d` for every method it applies to.
    #[arg(long)]
    pub reduce: Option<String>,
    /// Reduction dimension or `full`; repeatable.
    #[arg(long = "d")]
    pub d: Vec<String>,
    #[arg(long)]
    pub splits: Option<usize>,
    #[arg(long)]
    pub test_frac: Option<f64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Mean-center features as well as scaling them.
    #[arg(long)]
    pub center: bool,
    /// External predictions CSV (method,split,row_id,prediction) to score.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Write every test prediction to predictions.csv.
    #[arg(long)]
    pub export_predictions: bool,
    /// Write the train/test rows of every split to split_rows.csv.
    #[arg(long)]
    pub export_splits: bool,
    /// Write fitted encoders, scalers and models of every cell under models/.
    #[arg(long)]
    pub save_models: bool,
}

#[derive(Debug, Clone, Args)]
pub struct HistogramArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Repeatable; defaults to lev_ratio, jaro_winkler and ngram3.
    #[arg(long = "measure")]
    pub measures: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CardinalityArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Number of log-spaced sample sizes.
    #[arg(long, default_value_t = 20)]
    pub checkpoints: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 200)]
    pub entities: usize,
    #[arg(long, default_value_t = 5000)]
    pub samples: usize,
    /// Chance that a row is corrupted.
    #[arg(long, default_value_t = 0.3)]
    pub corruption: f64,
    /// Weights of typo, abbreviation, extraneous token, special characters
    /// and concatenated hierarchy, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 5)]
    pub mix: Option<Vec<f64>>,
    #[arg(long, default_value = "regression")]
    pub task: String,
    #[arg(long, default_value_t = 2)]
    pub classes: usize,
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    #[arg(long, default_value_t = 0.1)]
    pub label_noise: f64,
    /// Zipf exponent of entity frequencies.
    #[arg(long, default_value_t = 0.5)]
    pub skew: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InspectArgs {
    pub path: PathBuf,
    /// Write the re-serialized state here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

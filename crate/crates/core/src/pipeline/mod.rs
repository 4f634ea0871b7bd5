//! The prediction benchmark: tables, splits, feature assembly, metrics, the
//! synthetic dirty-corpus generator and the split × method protocol.

pub mod benchmark;
pub mod cardinality;
pub mod corpus;
pub mod features;
pub mod method;
pub mod metrics;
pub mod split;
pub mod table;

pub use benchmark::{
    average_ranking, check_benchmark, run_benchmark, run_cell, run_cell_detailed, split_for, CellRun, FittedModel, BenchmarkConfig, BenchmarkResult, CellOutcome,
    LearnerConfig,
};
pub use cardinality::{cardinality_curve, log_spaced_checkpoints};
pub use corpus::{generate_dirty_corpus, CorruptionKind, CorruptionMix, DirtyCorpus, DirtyCorpusSpec};
pub use features::{FeatureAssembler, Scaler};
pub use method::{fit_method, Method, Reduction};
pub use metrics::{accuracy, average_precision, r2_score, score, Prediction};
pub use split::train_test_split;
pub use table::Table;

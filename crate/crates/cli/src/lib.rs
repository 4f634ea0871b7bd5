//! Command-line front end for `dirtyenc-core`: CSV ingestion, the TOML run
//! configuration, the encoder/model state format, the parallel benchmark
//! grid and the result files.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod output;
pub mod runner;
pub mod state;

pub use commands::run;
pub use error::{CliError, CliResult};

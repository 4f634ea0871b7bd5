//! Similarity encoding of dirty, high-cardinality categorical variables.
//!
//! This crate is the allocation-only core: string similarity measures,
//! categorical encoders with a uniform fit/transform contract, dimensionality
//! reduction (random projections and prototype selection), ridge and logistic
//! learners with internal cross-validation, and the benchmark protocol that
//! ties them together. Everything is a deterministic function of its inputs
//! and seeds. File formats, CSV ingestion and the command line live in the
//! `dirtyenc` companion crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod encoders;
pub mod error;
pub mod learners;
pub mod matrix;
pub mod pipeline;
pub mod reduction;
pub mod rng;
pub mod similarity;
pub mod target;

pub use encoders::{CategoryDomain, EncoderSpec, EncoderState, FittedEncoder, TargetStats};
pub use error::{Error, Result};
pub use matrix::FeatureMatrix;
pub use reduction::{KMeansModel, ProjectionMatrix, PrototypeMethod, PrototypeSet};
pub use similarity::{EditWeights, NGramSet, SimilarityMeasure};
pub use target::{Target, TaskKind};

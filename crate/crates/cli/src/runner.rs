//! Parallel split × method grid and external-prediction scoring.

use std::collections::BTreeMap;
use std::path::Path;

use dirtyenc_core::pipeline::{
    check_benchmark, run_cell_detailed, score, split_for, BenchmarkConfig, CellRun, FittedModel, Prediction, Table,
};
use dirtyenc_core::{Target, TaskKind};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::state::{self, StateObject};

#[derive(Debug, Clone, Copy, Default)]
pub struct GridOptions {
    pub jobs: usize,
    pub keep_predictions: bool,
    pub keep_models: bool,
}

/// What the CLI keeps from one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub method: usize,
    pub split: usize,
    pub score: f64,
    pub unseen_rate: f64,
    pub n_test: usize,
    /// `(row_id, prediction)` of every test row.
    pub predictions: Vec<(usize, String)>,
    /// Serialized encoder, scaler and model.
    pub models: Option<[String; 3]>,
}

fn prediction_strings(run: &CellRun, target: &Target) -> Vec<(usize, String)> {
    let text: Vec<String> = match (&run.prediction, target) {
        (Prediction::Values(v) | Prediction::Scores(v), _) => v.iter().map(f64::to_string).collect(),
        (Prediction::Labels(l), Target::Classes { names, .. }) => l.iter().map(|&c| names[c].clone()).collect(),
        (Prediction::Labels(l), _) => l.iter().map(usize::to_string).collect(),
    };
    run.test_rows.iter().copied().zip(text).collect()
}

fn record(run: CellRun, method: usize, split: usize, target: &Target, opts: GridOptions) -> CellRecord {
    let predictions = if opts.keep_predictions { prediction_strings(&run, target) } else { Vec::new() };
    let models = opts.keep_models.then(|| {
        let model = match &run.model {
            FittedModel::Ridge(m) => StateObject::Ridge(m.clone()),
            FittedModel::Logistic(m) => StateObject::Logistic(m.clone()),
        };
        [
            state::to_string(&StateObject::Encoder(run.assembler.dirty.clone())),
            state::to_string(&StateObject::Scaler(run.assembler.scaler.clone())),
            state::to_string(&model),
        ]
    });
    CellRecord {
        method,
        split,
        score: run.outcome.score,
        unseen_rate: run.outcome.unseen_rate,
        n_test: run.test_rows.len(),
        predictions,
        models,
    }
}

/// Runs every (method, split) cell on `jobs` threads. Records come back in
/// method-major order whatever the scheduling.
pub fn run_grid(table: &Table, task: TaskKind, cfg: &BenchmarkConfig, opts: GridOptions) -> CliResult<Vec<CellRecord>> {
    check_benchmark(table, task, cfg).map_err(CliError::data)?;
    let cells: Vec<(usize, usize)> = (0..cfg.methods.len())
        .flat_map(|m| (0..cfg.n_splits).map(move |s| (m, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(CliError::config)?;
    let results: Vec<_> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(m, s)| {
                let run = run_cell_detailed(table, task, cfg, m, s)?;
                log::debug!("{} split {s}: {}", cfg.methods[m], run.outcome.score);
                Ok(record(run, m, s, &table.target, opts))
            })
            .collect()
    });
    results
        .into_iter()
        .collect::<dirtyenc_core::Result<Vec<_>>>()
        .map_err(CliError::data)
}

/// Scores of externally produced predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalScores {
    pub methods: Vec<String>,
    /// `scores[method][split]`.
    pub scores: Vec<Vec<f64>>,
}

/// Reads `method,split,row_id,prediction` rows and scores each (method,
/// split) pair against the benchmark's own test rows. Every method must
/// cover every split, and each split exactly its test rows.
pub fn score_external(path: &Path, table: &Table, task: TaskKind, cfg: &BenchmarkConfig) -> CliResult<ExternalScores> {
    let raw = crate::ingest::RawCsv::read(path)?;
    let col = |name: &str| {
        raw.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("{}: missing column `{name}`", path.display())))
    };
    let (mi, si, ri, pi) = (col("method")?, col("split")?, col("row_id")?, col("prediction")?);
    let bad = |line: usize, what: &str| CliError::Data(format!("{}: data row {line}: bad {what}", path.display()));

    let mut order: Vec<String> = Vec::new();
    let mut grid: BTreeMap<&str, BTreeMap<usize, BTreeMap<usize, &str>>> = BTreeMap::new();
    for (line, row) in raw.rows.iter().enumerate() {
        let method = row[mi].as_str();
        let split: usize = row[si].trim().parse().map_err(|_| bad(line, "split"))?;
        let row_id: usize = row[ri].trim().parse().map_err(|_| bad(line, "row_id"))?;
        if !grid.contains_key(method) {
            order.push(method.to_string());
        }
        if grid.entry(method).or_default().entry(split).or_default().insert(row_id, row[pi].trim()).is_some() {
            return Err(CliError::Data(format!(
                "{}: duplicate prediction for method `{method}`, split {split}, row {row_id}",
                path.display()
            )));
        }
    }
    if order.is_empty() {
        return Err(CliError::Data(format!("{}: no predictions", path.display())));
    }

    let tests = (0..cfg.n_splits)
        .map(|s| split_for(table, task, cfg, s).map(|(_, test)| test))
        .collect::<dirtyenc_core::Result<Vec<_>>>()
        .map_err(CliError::data)?;
    let mut scores = Vec::with_capacity(order.len());
    for method in &order {
        let splits = &grid[method.as_str()];
        if let Some(extra) = splits.keys().find(|&&s| s >= cfg.n_splits) {
            return Err(CliError::Data(format!("external method `{method}`: split {extra} is out of range")));
        }
        let mut row = Vec::with_capacity(cfg.n_splits);
        for (s, test) in tests.iter().enumerate() {
            let preds = splits
                .get(&s)
                .ok_or_else(|| CliError::Data(format!("external method `{method}` has no predictions for split {s}")))?;
            if preds.len() != test.len() || test.iter().any(|r| !preds.contains_key(r)) {
                return Err(CliError::Data(format!(
                    "external method `{method}`, split {s}: rows do not match the split's test rows"
                )));
            }
            let values: Vec<&str> = test.iter().map(|r| preds[r]).collect();
            let truth = table.target.select(test);
            let prediction = parse_predictions(&values, task, &table.target)
                .map_err(|e| CliError::Data(format!("external method `{method}`, split {s}: {e}")))?;
            row.push(score(task, &truth, &prediction).map_err(CliError::data)?);
        }
        scores.push(row);
    }
    Ok(ExternalScores { methods: order, scores })
}

fn parse_predictions(values: &[&str], task: TaskKind, target: &Target) -> Result<Prediction, String> {
    let numbers = || {
        values
            .iter()
            .map(|v| v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or(format!("`{v}` is not a finite number")))
            .collect::<Result<Vec<_>, _>>()
    };
    match (task, target) {
        (TaskKind::Regression, _) => numbers().map(Prediction::Values),
        (TaskKind::BinaryClassification, _) => numbers().map(Prediction::Scores),
        (TaskKind::MulticlassClassification, Target::Classes { names, .. }) => values
            .iter()
            .map(|v| names.iter().position(|n| n == v).ok_or(format!("unknown class `{v}`")))
            .collect::<Result<Vec<_>, _>>()
            .map(Prediction::Labels),
        _ => Err("target does not match task".into()),
    }
}

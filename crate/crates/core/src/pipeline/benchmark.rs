use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::features::FeatureAssembler;
use super::method::{fit_method, Method};
use super::metrics::{score, Prediction};
use super::split::train_test_split;
use super::table::Table;
use crate::error::{Error, Result};
use crate::learners::{
    logistic_fit, logistic_predict_proba, ridge_fit, ridge_predict, LogisticConfig, LogisticModel, RidgeModel,
    DEFAULT_FOLDS, DEFAULT_LAMBDA_GRID,
};
use crate::rng::derive_seed;
use crate::target::{Target, TaskKind};

const ENCODER_STREAM: u64 = 101;
const LEARNER_STREAM: u64 = 202;

/// Ridge settings for regression and logistic settings for classification.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub lambda_grid: Vec<f64>,
    pub folds: usize,
    pub logistic: LogisticConfig,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            lambda_grid: DEFAULT_LAMBDA_GRID.to_vec(),
            folds: DEFAULT_FOLDS,
            logistic: LogisticConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub methods: Vec<Method>,
    pub n_splits: usize,
    pub test_fraction: f64,
    pub learner: LearnerConfig,
    pub seed: u64,
    /// Mean-center features in addition to scaling them.
    pub center: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            methods: Vec::new(),
            n_splits: 100,
            test_fraction: 0.2,
            learner: LearnerConfig::default(),
            seed: 0,
            center: false,
        }
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no methods to benchmark".into()));
        }
        if self.n_splits == 0 {
            return Err(Error::InvalidParameter("need at least one split".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::InvalidParameter("test fraction must lie in (0, 1)".into()));
        }
        Ok(())
    }

    pub fn split_seed(&self, split: usize) -> u64 {
        derive_seed(self.seed, split as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellOutcome {
    pub score: f64,
    /// Share of test rows whose dirty value never occurs in the training rows.
    pub unseen_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub task: TaskKind,
    pub methods: Vec<String>,
    /// `scores[method][split]`.
    pub scores: Vec<Vec<f64>>,
    pub unseen_rates: Vec<f64>,
    pub medians: Vec<f64>,
    pub means: Vec<f64>,
    /// Rank of every method by median score on this dataset, 1 = best.
    pub ranks: Vec<f64>,
}

impl BenchmarkResult {
    /// Aggregates a score grid (`scores[method][split]`).
    pub fn from_scores(
        task: TaskKind,
        methods: Vec<String>,
        scores: Vec<Vec<f64>>,
        unseen_rates: Vec<f64>,
    ) -> Result<Self> {
        if methods.len() != scores.len() {
            return Err(Error::LengthMismatch {
                expected: methods.len(),
                got: scores.len(),
            });
        }
        if scores.iter().any(Vec::is_empty) {
            return Err(Error::EmptyInput("method scores"));
        }
        let medians: Vec<f64> = scores.iter().map(|s| median(s)).collect();
        let means = scores.iter().map(|s| s.iter().sum::<f64>() / s.len() as f64).collect();
        let ranks = rank_descending(&medians);
        Ok(Self {
            task,
            methods,
            scores,
            unseen_rates,
            medians,
            means,
            ranks,
        })
    }

    pub fn n_splits(&self) -> usize {
        self.unseen_rates.len()
    }
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Ranks with 1 for the largest value; tied values share the mean of their ranks.
fn rank_descending(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Mean rank of every method over several datasets. All results must list
/// the same methods in the same order.
pub fn average_ranking(results: &[BenchmarkResult]) -> Result<Vec<(String, f64)>> {
    let first = results.first().ok_or(Error::EmptyInput("benchmark results"))?;
    if let Some(r) = results.iter().find(|r| r.methods != first.methods) {
        return Err(Error::InvalidParameter(alloc::format!(
            "method lists differ: {:?} vs {:?}",
            first.methods,
            r.methods
        )));
    }
    Ok(first
        .methods
        .iter()
        .enumerate()
        .map(|(m, name)| {
            let total: f64 = results.iter().map(|r| r.ranks[m]).sum();
            (name.clone(), total / results.len() as f64)
        })
        .collect())
}

fn check_task(table: &Table, task: TaskKind) -> Result<()> {
    table.validate()?;
    let ok = match (&table.target, task) {
        (Target::Continuous(_), TaskKind::Regression) => true,
        (Target::Classes { names, .. }, TaskKind::BinaryClassification) => names.len() == 2,
        (Target::Classes { names, .. }, TaskKind::MulticlassClassification) => names.len() >= 2,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!(
            "target `{}` does not fit task `{task}`",
            table.target_name
        )))
    }
}

/// Train/test rows of split number `split`. Only binary tasks are stratified.
pub fn split_for(table: &Table, task: TaskKind, cfg: &BenchmarkConfig, split: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let stratify = match (&table.target, task) {
        (Target::Classes { labels, .. }, TaskKind::BinaryClassification) => Some(labels.as_slice()),
        _ => None,
    };
    train_test_split(table.n_rows(), cfg.test_fraction, stratify, cfg.split_seed(split))
}

fn unseen_rate(train: &Table, test: &Table) -> f64 {
    let seen: BTreeSet<&str> = train.dirty.iter().map(String::as_str).collect();
    let unseen = test.dirty.iter().filter(|v| !seen.contains(v.as_str())).count();
    unseen as f64 / test.n_rows() as f64
}

/// The learner fitted in one cell.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Ridge(RidgeModel),
    Logistic(LogisticModel),
}

/// Everything one cell produced, for export and audit.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRun {
    pub outcome: CellOutcome,
    pub assembler: FeatureAssembler,
    pub model: FittedModel,
    pub test_rows: Vec<usize>,
    pub prediction: Prediction,
}

fn evaluate(table: &Table, task: TaskKind, method: &Method, cfg: &BenchmarkConfig, split: usize) -> Result<CellRun> {
    let (train_idx, test_idx) = split_for(table, task, cfg, split)?;
    let train = table.select(&train_idx);
    let test = table.select(&test_idx);
    let split_seed = cfg.split_seed(split);
    let encoder = fit_method(method, &train.dirty, Some(&train.target), derive_seed(split_seed, ENCODER_STREAM))?;
    let assembler = FeatureAssembler::fit(&train, encoder, cfg.center)?;
    let x_train = assembler.transform(&train)?;
    let x_test = assembler.transform(&test)?;
    let learner_seed = derive_seed(split_seed, LEARNER_STREAM);
    let (model, prediction) = match &train.target {
        Target::Continuous(y) => {
            let model = ridge_fit(&x_train, y, &cfg.learner.lambda_grid, cfg.learner.folds, learner_seed)?;
            let pred = Prediction::Values(ridge_predict(&model, &x_test)?);
            (FittedModel::Ridge(model), pred)
        }
        Target::Classes { labels, names } => {
            let model = logistic_fit(&x_train, labels, names.len(), &cfg.learner.logistic, learner_seed)?;
            let proba = logistic_predict_proba(&model, &x_test)?;
            let pred = if task == TaskKind::BinaryClassification {
                Prediction::Scores(proba.column(1))
            } else {
                Prediction::Labels(
                    (0..proba.rows())
                        .map(|i| {
                            let row = proba.row(i);
                            (0..row.len()).fold(0, |best, c| if row[c] > row[best] { c } else { best })
                        })
                        .collect(),
                )
            };
            (FittedModel::Logistic(model), pred)
        }
    };
    let s = score(task, &test.target, &prediction)?;
    if !s.is_finite() {
        return Err(Error::InvalidParameter("non-finite score".into()));
    }
    Ok(CellRun {
        outcome: CellOutcome {
            score: s,
            unseen_rate: unseen_rate(&train, &test),
        },
        assembler,
        model,
        test_rows: test_idx,
        prediction,
    })
}

fn method_at(cfg: &BenchmarkConfig, method: usize) -> Result<&Method> {
    cfg.methods
        .get(method)
        .ok_or_else(|| Error::InvalidParameter(alloc::format!("no method #{method}")))
}

/// Like [`run_cell`], keeping the fitted encoder, model and test predictions.
pub fn run_cell_detailed(
    table: &Table,
    task: TaskKind,
    cfg: &BenchmarkConfig,
    method: usize,
    split: usize,
) -> Result<CellRun> {
    let m = method_at(cfg, method)?;
    evaluate(table, task, m, cfg, split).map_err(|e| Error::Cell {
        method: alloc::format!("{m}"),
        split,
        source: alloc::boxed::Box::new(e),
    })
}

/// Scores one (method, split) cell. Pure given the table, config and indices,
/// so cells may run in any order or in parallel.
pub fn run_cell(table: &Table, task: TaskKind, cfg: &BenchmarkConfig, method: usize, split: usize) -> Result<CellOutcome> {
    run_cell_detailed(table, task, cfg, method, split).map(|run| run.outcome)
}

/// Runs every method on every split in sequence.
pub fn run_benchmark(table: &Table, task: TaskKind, cfg: &BenchmarkConfig) -> Result<BenchmarkResult> {
    cfg.validate()?;
    check_task(table, task)?;
    let mut scores = alloc::vec![Vec::with_capacity(cfg.n_splits); cfg.methods.len()];
    let mut unseen = Vec::with_capacity(cfg.n_splits);
    for split in 0..cfg.n_splits {
        for (m, row) in scores.iter_mut().enumerate() {
            let cell = run_cell(table, task, cfg, m, split)?;
            row.push(cell.score);
            if m == 0 {
                unseen.push(cell.unseen_rate);
            }
        }
    }
    let names = cfg.methods.iter().map(|m| alloc::format!("{m}")).collect();
    BenchmarkResult::from_scores(task, names, scores, unseen)
}

/// Checks a table against a task before cells are dispatched elsewhere.
pub fn check_benchmark(table: &Table, task: TaskKind, cfg: &BenchmarkConfig) -> Result<()> {
    cfg.validate()?;
    check_task(table, task)
}

//! Scores: R² for regression, average precision for binary classification,
//! accuracy for multiclass classification. Higher is better for all three.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::target::{Target, TaskKind};

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a == 0 {
        return Err(Error::EmptyInput("scored samples"));
    }
    if a != b {
        return Err(Error::LengthMismatch { expected: a, got: b });
    }
    Ok(())
}

/// Coefficient of determination. A constant `y_true` scores 1 when predicted
/// exactly and 0 otherwise.
pub fn r2_score(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_lengths(y_true.len(), y_pred.len())?;
    let mean = y_true.iter().sum::<f64>() / y_true.len() as f64;
    let ss_tot: f64 = y_true.iter().map(|y| (y - mean) * (y - mean)).sum();
    let ss_res: f64 = y_true.iter().zip(y_pred).map(|(y, p)| (y - p) * (y - p)).sum();
    if ss_tot == 0.0 {
        return Ok(if ss_res == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(1.0 - ss_res / ss_tot)
}

/// Step-wise average precision `Σ_k (R_k − R_{k−1})·P_k` over samples ranked
/// by decreasing score; equal scores keep input order.
pub fn average_precision(y_true: &[bool], scores: &[f64]) -> Result<f64> {
    check_lengths(y_true.len(), scores.len())?;
    let positives = y_true.iter().filter(|&&y| y).count();
    if positives == 0 {
        return Err(Error::NoPositiveLabels);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut tp = 0usize;
    let mut ap = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        if y_true[i] {
            tp += 1;
            // Recall grows by 1/positives exactly at positive samples.
            ap += (tp as f64 / (rank + 1) as f64) / positives as f64;
        }
    }
    Ok(ap)
}

pub fn accuracy(y_true: &[usize], y_pred: &[usize]) -> Result<f64> {
    check_lengths(y_true.len(), y_pred.len())?;
    let hits = y_true.iter().zip(y_pred).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / y_true.len() as f64)
}

/// Model output in the form each task is scored on.
#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Values(Vec<f64>),
    /// Positive-class scores.
    Scores(Vec<f64>),
    Labels(Vec<usize>),
}

pub fn score(task: TaskKind, y_true: &Target, prediction: &Prediction) -> Result<f64> {
    match (task, y_true, prediction) {
        (TaskKind::Regression, Target::Continuous(y), Prediction::Values(p)) => r2_score(y, p),
        (TaskKind::BinaryClassification, Target::Classes { labels, .. }, Prediction::Scores(s)) => {
            let positive: Vec<bool> = labels.iter().map(|&l| l == 1).collect();
            average_precision(&positive, s)
        }
        (TaskKind::MulticlassClassification, Target::Classes { labels, .. }, Prediction::Labels(p)) => {
            accuracy(labels, p)
        }
        _ => Err(Error::InvalidParameter(alloc::format!(
            "prediction kind does not match task `{task}`"
        ))),
    }
}

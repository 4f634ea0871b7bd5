use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::{cv_folds, fold_split, DEFAULT_FOLDS};
use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

/// L2 penalties tried by internal cross-validation.
pub const DEFAULT_REG_GRID: [f64; 3] = [0.001, 0.01, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassWeighting {
    #[default]
    None,
    /// Sample weight `n / (#classes · n_class)`.
    InverseFrequency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticConfig {
    pub reg_grid: Vec<f64>,
    pub folds: usize,
    pub class_weighting: ClassWeighting,
    pub max_iter: usize,
    pub step: f64,
    pub tol: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            reg_grid: DEFAULT_REG_GRID.to_vec(),
            folds: DEFAULT_FOLDS,
            class_weighting: ClassWeighting::None,
            max_iter: 500,
            step: 0.1,
            tol: 1e-6,
        }
    }
}

/// Multinomial logistic regression.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    /// `#classes × p`, row-major.
    pub weights: FeatureMatrix,
    pub intercepts: Vec<f64>,
    pub chosen_reg: f64,
    pub class_weighting: ClassWeighting,
    pub cv_scores: Vec<f64>,
    /// Training loss after every accepted step of the final fit.
    pub loss_history: Vec<f64>,
}

impl LogisticModel {
    pub fn n_classes(&self) -> usize {
        self.intercepts.len()
    }
}

fn sample_weights(labels: &[usize], n_classes: usize, weighting: ClassWeighting) -> Vec<f64> {
    match weighting {
        ClassWeighting::None => alloc::vec![1.0; labels.len()],
        ClassWeighting::InverseFrequency => {
            let mut counts = alloc::vec![0usize; n_classes];
            for &l in labels {
                counts[l] += 1;
            }
            let present = counts.iter().filter(|&&c| c > 0).count() as f64;
            let n = labels.len() as f64;
            labels.iter().map(|&l| n / (present * counts[l] as f64)).collect()
        }
    }
}

/// Parameters as a `#classes × (p + 1)` matrix whose last column holds the
/// intercepts.
struct Problem<'a> {
    x: &'a DMatrix<f64>,
    labels: &'a [usize],
    weights: &'a [f64],
    total_weight: f64,
    reg: f64,
}

impl Problem<'_> {
    fn scores(&self, theta: &DMatrix<f64>) -> DMatrix<f64> {
        let p = self.x.ncols();
        let w = theta.columns(0, p);
        let b = theta.column(p);
        let mut z = self.x * w.transpose();
        for mut row in z.row_iter_mut() {
            row += b.transpose();
        }
        z
    }

    /// Row-wise softmax in place; returns Σ_i w_i · (−log p_{i,y_i}).
    fn softmax_nll(&self, z: &mut DMatrix<f64>) -> f64 {
        let mut nll = 0.0;
        for (i, mut row) in z.row_iter_mut().enumerate() {
            let max = row.max();
            let mut sum = 0.0;
            for v in row.iter_mut() {
                *v = libm::exp(*v - max);
                sum += *v;
            }
            row /= sum;
            nll -= self.weights[i] * libm::log(row[self.labels[i]].max(f64::MIN_POSITIVE));
        }
        nll
    }

    fn penalty(&self, theta: &DMatrix<f64>) -> f64 {
        let p = self.x.ncols();
        0.5 * self.reg * theta.columns(0, p).norm_squared()
    }

    /// Loss at `theta` plus the residuals `(P − Y) · w_i / W` its gradient
    /// is built from.
    fn evaluate(&self, theta: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
        let mut resid = self.scores(theta);
        let nll = self.softmax_nll(&mut resid);
        for (i, mut row) in resid.row_iter_mut().enumerate() {
            row[self.labels[i]] -= 1.0;
            row *= self.weights[i] / self.total_weight;
        }
        (nll / self.total_weight + self.penalty(theta), resid)
    }

    fn gradient(&self, theta: &DMatrix<f64>, resid: &DMatrix<f64>) -> DMatrix<f64> {
        let p = self.x.ncols();
        let mut grad = DMatrix::zeros(theta.nrows(), p + 1);
        let gw = resid.tr_mul(self.x) + theta.columns(0, p) * self.reg;
        grad.columns_mut(0, p).copy_from(&gw);
        for (c, col) in resid.column_iter().enumerate() {
            grad[(c, p)] = col.sum();
        }
        grad
    }

    fn loss_and_gradient(&self, theta: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
        let (loss, resid) = self.evaluate(theta);
        (loss, self.gradient(theta, &resid))
    }
}

fn validate(x: &FeatureMatrix, labels: &[usize], n_classes: usize) -> Result<()> {
    if x.rows() == 0 || x.cols() == 0 {
        return Err(Error::EmptyInput("design matrix"));
    }
    if labels.len() != x.rows() {
        return Err(Error::LengthMismatch {
            expected: x.rows(),
            got: labels.len(),
        });
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(Error::InvalidParameter(alloc::format!(
            "label {bad} out of range for {n_classes} classes"
        )));
    }
    let first = labels[0];
    if n_classes < 2 || labels.iter().all(|&l| l == first) {
        return Err(Error::SingleClass);
    }
    Ok(())
}

/// Loss and gradient at parameters `(weights, intercepts)`, exposed for
/// checking the optimizer. The gradient comes back in the same layout.
pub fn logistic_loss_and_gradient(
    x: &FeatureMatrix,
    labels: &[usize],
    sample_weights: &[f64],
    weights: &FeatureMatrix,
    intercepts: &[f64],
    reg: f64,
) -> Result<(f64, FeatureMatrix, Vec<f64>)> {
    let c = intercepts.len();
    if weights.shape() != (c, x.cols()) {
        return Err(Error::DimensionMismatch {
            expected: x.cols(),
            got: weights.cols(),
        });
    }
    if sample_weights.len() != x.rows() || labels.len() != x.rows() {
        return Err(Error::LengthMismatch {
            expected: x.rows(),
            got: sample_weights.len().min(labels.len()),
        });
    }
    let xd = x.to_dmatrix();
    let problem = Problem {
        x: &xd,
        labels,
        weights: sample_weights,
        total_weight: sample_weights.iter().sum(),
        reg,
    };
    let theta = pack(weights, intercepts);
    let (loss, grad) = problem.loss_and_gradient(&theta);
    let (gw, gb) = unpack(&grad);
    Ok((loss, gw, gb))
}

fn pack(weights: &FeatureMatrix, intercepts: &[f64]) -> DMatrix<f64> {
    let (c, p) = weights.shape();
    DMatrix::from_fn(c, p + 1, |i, j| if j < p { weights.get(i, j) } else { intercepts[i] })
}

fn unpack(theta: &DMatrix<f64>) -> (FeatureMatrix, Vec<f64>) {
    let p = theta.ncols() - 1;
    let w = FeatureMatrix::from_dmatrix(&theta.columns(0, p).into_owned());
    let b = theta.column(p).iter().copied().collect();
    (w, b)
}

/// Full-batch gradient descent from zero. A step that would increase the
/// loss is rejected and the step size halved, so accepted losses never
/// increase.
fn descend(problem: &Problem<'_>, n_classes: usize, cfg: &LogisticConfig) -> (DMatrix<f64>, Vec<f64>) {
    let mut theta = DMatrix::zeros(n_classes, problem.x.ncols() + 1);
    let (mut loss, mut resid) = problem.evaluate(&theta);
    let mut history = alloc::vec![loss];
    let mut step = cfg.step;
    for _ in 0..cfg.max_iter {
        let grad = problem.gradient(&theta, &resid);
        let mut accepted = None;
        while step > 1e-12 {
            let candidate = &theta - &grad * step;
            let (l, r) = problem.evaluate(&candidate);
            if l <= loss {
                accepted = Some((candidate, l, r));
                break;
            }
            step *= 0.5;
        }
        let Some((next, next_loss, next_resid)) = accepted else {
            break;
        };
        let delta = loss - next_loss;
        theta = next;
        loss = next_loss;
        resid = next_resid;
        history.push(next_loss);
        if delta < cfg.tol {
            break;
        }
    }
    (theta, history)
}

fn fit_fixed(
    x: &DMatrix<f64>,
    labels: &[usize],
    n_classes: usize,
    reg: f64,
    cfg: &LogisticConfig,
) -> (DMatrix<f64>, Vec<f64>) {
    let weights = sample_weights(labels, n_classes, cfg.class_weighting);
    let problem = Problem {
        x,
        labels,
        total_weight: weights.iter().sum(),
        weights: &weights,
        reg,
    };
    descend(&problem, n_classes, cfg)
}

fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = j;
        }
    }
    best
}

/// L2-regularized multinomial logistic regression. The penalty is chosen from
/// `cfg.reg_grid` by validation accuracy over seeded folds (ties go to the
/// stronger penalty) and the model is refitted on all rows.
pub fn logistic_fit(
    x: &FeatureMatrix,
    labels: &[usize],
    n_classes: usize,
    cfg: &LogisticConfig,
    seed: u64,
) -> Result<LogisticModel> {
    validate(x, labels, n_classes)?;
    if cfg.reg_grid.is_empty() || cfg.reg_grid.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter("regularization grid must hold non-negative values".into()));
    }
    if cfg.folds < 2 || x.rows() < cfg.folds {
        return Err(Error::InvalidParameter(alloc::format!(
            "need 2 <= folds <= rows, got {} folds for {} rows",
            cfg.folds,
            x.rows()
        )));
    }
    let assignment = cv_folds(x.rows(), cfg.folds, seed);
    let mut sums = alloc::vec![0.0; cfg.reg_grid.len()];
    for f in 0..cfg.folds {
        let (train, valid) = fold_split(&assignment, f);
        let xt = x.select_rows(&train).to_dmatrix();
        let yt: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
        let xv = x.select_rows(&valid);
        for (s, &reg) in sums.iter_mut().zip(&cfg.reg_grid) {
            let (theta, _) = fit_fixed(&xt, &yt, n_classes, reg, cfg);
            let (w, b) = unpack(&theta);
            let proba = predict(&w, &b, &xv);
            let correct = valid
                .iter()
                .enumerate()
                .filter(|(r, &i)| argmax(proba.row(*r)) == labels[i])
                .count();
            *s += correct as f64 / valid.len() as f64;
        }
    }
    let cv_scores: Vec<f64> = sums.iter().map(|s| s / cfg.folds as f64).collect();
    let mut best = 0;
    for i in 1..cv_scores.len() {
        if cv_scores[i] > cv_scores[best]
            || (cv_scores[i] == cv_scores[best] && cfg.reg_grid[i] > cfg.reg_grid[best])
        {
            best = i;
        }
    }
    let chosen_reg = cfg.reg_grid[best];
    let (theta, loss_history) = fit_fixed(&x.to_dmatrix(), labels, n_classes, chosen_reg, cfg);
    let (weights, intercepts) = unpack(&theta);
    Ok(LogisticModel {
        weights,
        intercepts,
        chosen_reg,
        class_weighting: cfg.class_weighting,
        cv_scores,
        loss_history,
    })
}

fn predict(weights: &FeatureMatrix, intercepts: &[f64], x: &FeatureMatrix) -> FeatureMatrix {
    let c = intercepts.len();
    let mut out = FeatureMatrix::zeros(x.rows(), c);
    for i in 0..x.rows() {
        let row = out.row_mut(i);
        for k in 0..c {
            row[k] = crate::matrix::dot(x.row(i), weights.row(k)) + intercepts[k];
        }
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = libm::exp(*v - max);
            sum += *v;
        }
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    out
}

/// Softmax of the affine scores; one row per sample, one column per class.
pub fn logistic_predict_proba(model: &LogisticModel, x: &FeatureMatrix) -> Result<FeatureMatrix> {
    if x.cols() != model.weights.cols() {
        return Err(Error::DimensionMismatch {
            expected: model.weights.cols(),
            got: x.cols(),
        });
    }
    Ok(predict(&model.weights, &model.intercepts, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn separable_classes_are_fit_exactly() {
        let x = FeatureMatrix::from_rows(&[[-3.0], [-2.0], [-1.5], [-1.0], [1.0], [1.5], [2.0], [3.0]]).unwrap();
        let y = [0, 0, 0, 0, 1, 1, 1, 1];
        let cfg = LogisticConfig {
            reg_grid: vec![1e-4],
            ..LogisticConfig::default()
        };
        let m = logistic_fit(&x, &y, 2, &cfg, 0).unwrap();
        let p = logistic_predict_proba(&m, &x).unwrap();
        for (i, &label) in y.iter().enumerate() {
            assert_eq!(argmax(p.row(i)), label);
        }
    }

    #[test]
    fn zero_features_give_uniform_probabilities() {
        let x = FeatureMatrix::zeros(6, 2);
        let y = [0, 1, 0, 1, 0, 1];
        let m = logistic_fit(&x, &y, 2, &LogisticConfig::default(), 1).unwrap();
        let p = logistic_predict_proba(&m, &x).unwrap();
        for v in p.as_slice() {
            assert!((v - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn losses_never_increase() {
        let x = FeatureMatrix::from_rows(&[[0.3, 1.0], [1.2, -0.4], [-0.7, 0.2], [2.0, 2.0], [-1.0, -1.5], [0.1, 0.9]])
            .unwrap();
        let y = [0, 1, 2, 1, 0, 2];
        let cfg = LogisticConfig {
            step: 5.0,
            ..LogisticConfig::default()
        };
        let m = logistic_fit(&x, &y, 3, &cfg, 2).unwrap();
        assert!(m.loss_history.windows(2).all(|w| w[1] <= w[0]));
        let p = logistic_predict_proba(&m, &x).unwrap();
        for i in 0..p.rows() {
            assert!((p.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn inverse_frequency_weights() {
        let w = sample_weights(&[0, 0, 0, 1], 2, ClassWeighting::InverseFrequency);
        assert_eq!(w, [4.0 / 6.0, 4.0 / 6.0, 4.0 / 6.0, 2.0]);
        let total: f64 = w.iter().sum();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_class_is_rejected() {
        let x = FeatureMatrix::zeros(3, 1);
        assert_eq!(
            logistic_fit(&x, &[1, 1, 1], 2, &LogisticConfig::default(), 0),
            Err(Error::SingleClass)
        );
        assert!(logistic_fit(&x, &[0, 1, 5], 2, &LogisticConfig::default(), 0).is_err());
    }
}

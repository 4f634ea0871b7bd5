use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::{cv_folds, fold_split, linalg};
use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::pipeline::metrics::r2_score;

pub const DEFAULT_LAMBDA_GRID: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub chosen_lambda: f64,
    pub lambda_grid: Vec<f64>,
    pub cv_folds: usize,
    /// Mean validation R² per grid entry.
    pub cv_scores: Vec<f64>,
}

/// Sufficient statistics of a block of rows for the primal ridge system.
struct Moments {
    gram: DMatrix<f64>,
    col_sum: DVector<f64>,
    xty: DVector<f64>,
    y_sum: f64,
    n: usize,
}

impl Moments {
    fn of(x: &DMatrix<f64>, y: &DVector<f64>) -> Self {
        Self {
            gram: x.transpose() * x,
            col_sum: DVector::from_iterator(x.ncols(), x.column_iter().map(|c| c.sum())),
            xty: x.tr_mul(y),
            y_sum: y.sum(),
            n: x.nrows(),
        }
    }

    fn minus(&self, other: &Moments) -> Self {
        Self {
            gram: &self.gram - &other.gram,
            col_sum: &self.col_sum - &other.col_sum,
            xty: &self.xty - &other.xty,
            y_sum: self.y_sum - other.y_sum,
            n: self.n - other.n,
        }
    }

    fn sum(parts: &[Moments]) -> Self {
        let mut total = Self {
            gram: parts[0].gram.clone(),
            col_sum: parts[0].col_sum.clone(),
            xty: parts[0].xty.clone(),
            y_sum: parts[0].y_sum,
            n: parts[0].n,
        };
        for m in &parts[1..] {
            total.gram += &m.gram;
            total.col_sum += &m.col_sum;
            total.xty += &m.xty;
            total.y_sum += m.y_sum;
            total.n += m.n;
        }
        total
    }

    /// Centers the statistics; the shifts are the offsets already removed
    /// from the rows and targets they were computed on.
    fn into_problem(mut self, x_shift: &DVector<f64>, y_shift: f64) -> CenteredProblem {
        let n = self.n as f64;
        let mean = &self.col_sum / n;
        let y_mean = self.y_sum / n;
        self.gram.ger(-n, &mean, &mean, 1.0);
        let rhs = &self.xty - &mean * self.y_sum;
        CenteredProblem {
            system: System::Primal { gram: self.gram, rhs },
            x_mean: mean + x_shift,
            y_mean: y_mean + y_shift,
        }
    }
}

enum System {
    /// `X̃ᵀX̃` and `X̃ᵀỹ`.
    Primal { gram: DMatrix<f64>, rhs: DVector<f64> },
    /// `X̃X̃ᵀ` for `p > n`, solved for the dual coefficients.
    Dual { xc: DMatrix<f64>, gram: DMatrix<f64>, yc: DVector<f64> },
}

struct CenteredProblem {
    system: System,
    x_mean: DVector<f64>,
    y_mean: f64,
}

fn column_means(x: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(x.ncols(), x.column_iter().map(|c| c.sum() / x.nrows() as f64))
}

fn center_columns(x: &mut DMatrix<f64>, mean: &DVector<f64>) {
    for (j, mut col) in x.column_iter_mut().enumerate() {
        col.add_scalar_mut(-mean[j]);
    }
}

impl CenteredProblem {
    fn new(x: &FeatureMatrix, y: &[f64]) -> Self {
        let (n, p) = x.shape();
        let mut xc = x.to_dmatrix();
        let x_mean = column_means(&xc);
        center_columns(&mut xc, &x_mean);
        let y_mean = y.iter().sum::<f64>() / n as f64;
        let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
        if p > n {
            let gram = &xc * xc.transpose();
            Self {
                system: System::Dual { xc, gram, yc },
                x_mean,
                y_mean,
            }
        } else {
            Moments::of(&xc, &yc).into_problem(&x_mean, y_mean)
        }
    }

    fn solve(&self, lambda: f64) -> Result<(Vec<f64>, f64)> {
        let shifted = |gram: &DMatrix<f64>| {
            let mut a = gram.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda;
            }
            linalg::cholesky(a)
        };
        let w = match &self.system {
            System::Primal { gram, rhs } => linalg::cholesky_solve(&shifted(gram)?, rhs),
            System::Dual { xc, gram, yc } => xc.tr_mul(&linalg::cholesky_solve(&shifted(gram)?, yc)),
        };
        let intercept = self.y_mean - self.x_mean.dot(&w);
        Ok((w.iter().copied().collect(), intercept))
    }
}

fn check_design(x: &FeatureMatrix, y: &[f64]) -> Result<()> {
    if x.rows() == 0 || x.cols() == 0 {
        return Err(Error::EmptyInput("design matrix"));
    }
    if y.len() != x.rows() {
        return Err(Error::LengthMismatch {
            expected: x.rows(),
            got: y.len(),
        });
    }
    Ok(())
}

/// Closed-form ridge with an unpenalized intercept: solves
/// `(X̃ᵀX̃ + λI) w = X̃ᵀỹ` on centered data and returns `(w, b)`.
pub fn ridge_solve(x: &FeatureMatrix, y: &[f64], lambda: f64) -> Result<(Vec<f64>, f64)> {
    check_design(x, y)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter("ridge penalty must be > 0".into()));
    }
    CenteredProblem::new(x, y).solve(lambda)
}

/// Picks λ from `lambda_grid` by mean validation R² over seeded folds (ties
/// go to the larger λ), then refits on all rows.
pub fn ridge_fit(x: &FeatureMatrix, y: &[f64], lambda_grid: &[f64], folds: usize, seed: u64) -> Result<RidgeModel> {
    check_design(x, y)?;
    if lambda_grid.is_empty() || lambda_grid.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidParameter("lambda grid must hold positive values".into()));
    }
    if folds < 2 || x.rows() < folds {
        return Err(Error::InvalidParameter(alloc::format!(
            "need 2 <= folds <= rows, got {folds} folds for {} rows",
            x.rows()
        )));
    }
    let assignment = cv_folds(x.rows(), folds, seed);
    let mut sums = alloc::vec![0.0; lambda_grid.len()];
    let (n, p) = x.shape();
    let smallest_train = n - (n + folds - 1) / folds;
    // Primal systems of all folds come from per-fold moments of globally
    // centered rows; the dual case refits each fold from scratch.
    let mut xg = x.to_dmatrix();
    let shift = column_means(&xg);
    center_columns(&mut xg, &shift);
    let yv = DVector::from_column_slice(y);
    let moments: Option<Vec<Moments>> = (p <= smallest_train).then(|| {
        (0..folds)
            .map(|f| {
                let (_, valid) = fold_split(&assignment, f);
                Moments::of(&xg.select_rows(&valid), &yv.select_rows(&valid))
            })
            .collect()
    });
    let total = moments.as_deref().map(Moments::sum);
    for f in 0..folds {
        let (train, valid) = fold_split(&assignment, f);
        let problem = match (&moments, &total) {
            (Some(parts), Some(total)) => total.minus(&parts[f]).into_problem(&shift, 0.0),
            _ => {
                let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
                CenteredProblem::new(&x.select_rows(&train), &yt)
            }
        };
        let xv = x.select_rows(&valid);
        let yv: Vec<f64> = valid.iter().map(|&i| y[i]).collect();
        for (s, &lambda) in sums.iter_mut().zip(lambda_grid) {
            let (w, b) = problem.solve(lambda)?;
            let pred = predict_raw(&xv, &w, b);
            *s += r2_score(&yv, &pred)?;
        }
    }
    let cv_scores: Vec<f64> = sums.iter().map(|s| s / folds as f64).collect();
    let mut best = 0;
    for i in 1..lambda_grid.len() {
        let better = cv_scores[i] > cv_scores[best]
            || (cv_scores[i] == cv_scores[best] && lambda_grid[i] > lambda_grid[best]);
        if better {
            best = i;
        }
    }
    let chosen_lambda = lambda_grid[best];
    let final_problem = match total {
        Some(total) => total.into_problem(&shift, 0.0),
        None => CenteredProblem::new(x, y),
    };
    let (weights, intercept) = final_problem.solve(chosen_lambda)?;
    Ok(RidgeModel {
        weights,
        intercept,
        chosen_lambda,
        lambda_grid: lambda_grid.to_vec(),
        cv_folds: folds,
        cv_scores,
    })
}

fn predict_raw(x: &FeatureMatrix, w: &[f64], b: f64) -> Vec<f64> {
    (0..x.rows()).map(|i| crate::matrix::dot(x.row(i), w) + b).collect()
}

/// `Xw + b`.
pub fn ridge_predict(model: &RidgeModel, x: &FeatureMatrix) -> Result<Vec<f64>> {
    if x.cols() != model.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: model.weights.len(),
            got: x.cols(),
        });
    }
    Ok(predict_raw(x, &model.weights, model.intercept))
}

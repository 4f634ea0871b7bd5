//! Linear learners with internally cross-validated regularization.

mod linalg;
mod logistic;
mod ridge;

use alloc::vec::Vec;

pub use logistic::{
    logistic_fit, logistic_loss_and_gradient, logistic_predict_proba, ClassWeighting, LogisticConfig,
    LogisticModel, DEFAULT_REG_GRID,
};
pub use ridge::{ridge_fit, ridge_predict, ridge_solve, RidgeModel, DEFAULT_LAMBDA_GRID};

use crate::rng;

/// Internal cross-validation folds.
pub const DEFAULT_FOLDS: usize = 3;

/// Fold index of every row: a seeded permutation dealt round-robin, so fold
/// sizes differ by at most one.
pub fn cv_folds(n: usize, folds: usize, seed: u64) -> Vec<usize> {
    let perm = rng::permutation(n, seed);
    let mut out = alloc::vec![0; n];
    for (pos, &i) in perm.iter().enumerate() {
        out[i] = pos % folds;
    }
    out
}

/// `(train, validation)` row indices of one fold.
pub(crate) fn fold_split(assignment: &[usize], fold: usize) -> (Vec<usize>, Vec<usize>) {
    let mut train = Vec::new();
    let mut valid = Vec::new();
    for (i, &f) in assignment.iter().enumerate() {
        if f == fold {
            valid.push(i);
        } else {
            train.push(i);
        }
    }
    (train, valid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_are_balanced_and_deterministic() {
        let a = cv_folds(10, 3, 5);
        assert_eq!(a, cv_folds(10, 3, 5));
        let mut sizes = [0; 3];
        for &f in &a {
            sizes[f] += 1;
        }
        assert_eq!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap(), 1);
        assert_ne!(a, cv_folds(10, 3, 6));
    }
}

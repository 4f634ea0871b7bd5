mod common;

use common::*;
use dirtyenc_core::learners::*;
use dirtyenc_core::FeatureMatrix;
use rand::Rng;

#[test]
fn ridge_solves_normal_equations() {
    let mut rng = seeded(10);
    for case in 0..20 {
        let n = rng.random_range(5..40);
        let p = rng.random_range(1..30);
        let x = random_matrix(&mut rng, n, p);
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let lambda = [0.1, 1.0, 10.0][case % 3];
        let (w, b) = ridge_solve(&x, &y, lambda).unwrap();
        assert!(normal_equation_residual(&x, &y, lambda, &w) < 1e-8, "case {case}: n={n} p={p}");
        let means: Vec<f64> = (0..p).map(|j| x.column(j).iter().sum::<f64>() / n as f64).collect();
        let y_mean = y.iter().sum::<f64>() / n as f64;
        let expected_b = y_mean - means.iter().zip(&w).map(|(m, w)| m * w).sum::<f64>();
        assert!((b - expected_b).abs() < 1e-10);
    }
}

#[test]
fn ridge_cv_model_matches_direct_solve() {
    let mut rng = seeded(11);
    let x = random_matrix(&mut rng, 60, 8);
    let y: Vec<f64> = (0..60).map(|i| x.row(i)[0] * 2.0 - x.row(i)[3] + rng.random_range(-0.1..0.1)).collect();
    let model = ridge_fit(&x, &y, &DEFAULT_LAMBDA_GRID, 3, 4).unwrap();
    assert!(DEFAULT_LAMBDA_GRID.contains(&model.chosen_lambda));
    let (w, b) = ridge_solve(&x, &y, model.chosen_lambda).unwrap();
    for (u, v) in model.weights.iter().zip(&w) {
        assert!((u - v).abs() < 1e-9);
    }
    assert!((model.intercept - b).abs() < 1e-9);
    assert_eq!(model, ridge_fit(&x, &y, &DEFAULT_LAMBDA_GRID, 3, 4).unwrap());
}

#[test]
fn ridge_weight_norm_shrinks_with_lambda() {
    let mut rng = seeded(12);
    for _ in 0..10 {
        let x = random_matrix(&mut rng, 25, 6);
        let y: Vec<f64> = (0..25).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norms: Vec<f64> = [0.01, 0.1, 1.0, 10.0, 100.0]
            .iter()
            .map(|&l| ridge_solve(&x, &y, l).unwrap().0.iter().map(|w| w * w).sum::<f64>())
            .collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn ridge_fits_noiseless_linear_target() {
    let mut rng = seeded(13);
    let x = random_matrix(&mut rng, 50, 3);
    let y: Vec<f64> = (0..50).map(|i| 1.0 + 3.0 * x.get(i, 0) - 2.0 * x.get(i, 2)).collect();
    let model = ridge_fit(&x, &y, &DEFAULT_LAMBDA_GRID, 3, 0).unwrap();
    assert_eq!(model.chosen_lambda, 0.1);
    let pred = ridge_predict(&model, &x).unwrap();
    let mean = y.iter().sum::<f64>() / 50.0;
    let ss_res: f64 = y.iter().zip(&pred).map(|(a, b)| (a - b).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|a| (a - mean).powi(2)).sum();
    assert!(1.0 - ss_res / ss_tot >= 0.999);
}

#[test]
fn ridge_predict_is_an_affine_map() {
    let mut rng = seeded(14);
    let x = random_matrix(&mut rng, 5, 3);
    let y = [1.0, 0.0, 2.0, 3.0, -1.0];
    let model = ridge_fit(&x, &y, &[1.0], 2, 0).unwrap();
    let pred = ridge_predict(&model, &x).unwrap();
    for i in 0..5 {
        let direct: f64 = (0..3).map(|j| x.get(i, j) * model.weights[j]).sum::<f64>() + model.intercept;
        assert!((pred[i] - direct).abs() < 1e-12);
    }
}

fn central_difference_check(x: &FeatureMatrix, labels: &[usize], weights: &FeatureMatrix, intercepts: &[f64], reg: f64) {
    let worst = central_difference_error(x, labels, weights, intercepts, reg);
    assert!(worst < 1e-5, "relative gradient error {worst}");
}

#[test]
fn logistic_gradient_matches_central_differences() {
    let mut rng = seeded(15);
    let x = random_matrix(&mut rng, 10, 3);
    let labels: Vec<usize> = (0..10).map(|i| i % 3).collect();
    central_difference_check(&x, &labels, &FeatureMatrix::zeros(3, 3), &[0.0; 3], 0.1);
    let w = random_matrix(&mut rng, 3, 3);
    central_difference_check(&x, &labels, &w, &[0.3, -0.2, 0.1], 0.01);
    let binary: Vec<usize> = (0..10).map(|i| i % 2).collect();
    central_difference_check(&x, &binary, &random_matrix(&mut rng, 2, 3), &[0.0, 0.5], 0.0);
}

#[test]
fn logistic_loss_never_increases() {
    let mut rng = seeded(16);
    for _ in 0..5 {
        let x = random_matrix(&mut rng, 40, 5);
        let labels: Vec<usize> = (0..40).map(|i| usize::from(x.get(i, 0) + 0.3 * x.get(i, 1) > 0.0)).collect();
        let cfg = LogisticConfig {
            step: 5.0,
            ..Default::default()
        };
        let model = logistic_fit(&x, &labels, 2, &cfg, 1).unwrap();
        assert!(model.loss_history.windows(2).all(|w| w[1] <= w[0]));
        let proba = logistic_predict_proba(&model, &x).unwrap();
        for i in 0..40 {
            let s: f64 = proba.row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
            assert!(proba.row(i).iter().all(|&p| p > 0.0 && p < 1.0));
        }
    }
}

#[test]
fn logistic_separates_separable_classes() {
    let x = FeatureMatrix::from_rows(&[[-3.0], [-2.0], [-1.5], [-1.0], [1.0], [1.5], [2.0], [3.0]]).unwrap();
    let labels = [0, 0, 0, 0, 1, 1, 1, 1];
    let cfg = LogisticConfig {
        reg_grid: vec![0.001],
        folds: 2,
        ..Default::default()
    };
    let model = logistic_fit(&x, &labels, 2, &cfg, 0).unwrap();
    let proba = logistic_predict_proba(&model, &x).unwrap();
    for (i, &l) in labels.iter().enumerate() {
        let predicted = usize::from(proba.get(i, 1) > proba.get(i, 0));
        assert_eq!(predicted, l);
    }
}

#[test]
fn logistic_on_zero_features_is_uniform() {
    let x = FeatureMatrix::zeros(6, 2);
    let labels = [0, 1, 0, 1, 0, 1];
    let model = logistic_fit(&x, &labels, 2, &LogisticConfig::default(), 0).unwrap();
    let proba = logistic_predict_proba(&model, &x).unwrap();
    assert!(proba.as_slice().iter().all(|&p| (p - 0.5).abs() < 1e-12));
    assert!(logistic_fit(&x, &[1; 6], 2, &LogisticConfig::default(), 0).is_err());
}

#[test]
fn inverse_frequency_weights_balance_classes() {
    let mut rng = seeded(17);
    let x = random_matrix(&mut rng, 30, 2);
    let labels: Vec<usize> = (0..30).map(|i| usize::from(i < 5)).collect();
    let w = FeatureMatrix::zeros(2, 2);
    // With n/(#classes·n_c) weights, each class carries half the total weight,
    // so the intercept gradient at zero vanishes.
    let weights: Vec<f64> = labels.iter().map(|&l| 30.0 / (2.0 * if l == 1 { 5.0 } else { 25.0 })).collect();
    let (_, _, gb) = logistic_loss_and_gradient(&x, &labels, &weights, &w, &[0.0, 0.0], 0.0).unwrap();
    assert!(gb.iter().all(|g| g.abs() < 1e-12));
    let cfg = LogisticConfig {
        class_weighting: ClassWeighting::InverseFrequency,
        ..Default::default()
    };
    let model = logistic_fit(&x, &labels, 2, &cfg, 0).unwrap();
    assert_eq!(model.class_weighting, ClassWeighting::InverseFrequency);
}

#[test]
fn cv_folds_are_a_function_of_their_inputs() {
    assert_eq!(cv_folds(20, 3, 1), cv_folds(20, 3, 1));
    let a = cv_folds(20, 4, 9);
    assert!(a.iter().all(|&f| f < 4));
}

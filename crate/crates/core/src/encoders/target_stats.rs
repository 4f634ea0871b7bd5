use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::target::{Target, TaskKind};

use super::CategoryDomain;

/// Default shrinkage strength `m` in `λ(n) = n / (n + m)`.
pub const DEFAULT_SHRINKAGE: f64 = 1.0;

/// Weight given to a category's own statistics after `n` observations.
pub fn shrinkage_weight(n: usize, m: f64) -> f64 {
    let n = n as f64;
    n / (n + m)
}

/// Target statistics of a categorical column.
///
/// `prior` and each row of `conditional` have one entry per encoded output:
/// the mean target for regression, the positive-class rate for binary tasks,
/// and one class rate per class for multiclass tasks. `class_conditional`
/// holds `P(d = category | y = c)` for every class and is empty for
/// regression.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetStats {
    pub task: TaskKind,
    pub shrinkage: f64,
    pub prior: Vec<f64>,
    pub conditional: Vec<Vec<f64>>,
    pub class_conditional: Vec<Vec<f64>>,
}

impl TargetStats {
    /// `codes[i]` is the domain index of row `i`.
    pub fn fit(domain: &CategoryDomain, codes: &[usize], target: &Target, shrinkage: f64) -> Result<Self> {
        if !(shrinkage > 0.0 && shrinkage.is_finite()) {
            return Err(Error::InvalidParameter("shrinkage must be > 0".into()));
        }
        if codes.len() != target.len() {
            return Err(Error::LengthMismatch {
                expected: codes.len(),
                got: target.len(),
            });
        }
        if codes.is_empty() {
            return Err(Error::EmptyInput("target"));
        }
        let k = domain.len();
        let task = target.kind();
        let (prior, conditional, class_conditional) = match (target, task) {
            (Target::Continuous(y), _) => {
                let mut sums = alloc::vec![0.0; k];
                for (&c, &v) in codes.iter().zip(y) {
                    sums[c] += v;
                }
                let prior = y.iter().sum::<f64>() / y.len() as f64;
                let cond = sums
                    .iter()
                    .zip(domain.frequencies())
                    .map(|(s, &n)| alloc::vec![s / n as f64])
                    .collect();
                (alloc::vec![prior], cond, Vec::new())
            }
            (Target::Classes { labels, names }, task) => {
                let nc = names.len();
                let mut joint = alloc::vec![alloc::vec![0usize; nc]; k];
                let mut per_class = alloc::vec![0usize; nc];
                for (&c, &l) in codes.iter().zip(labels) {
                    joint[c][l] += 1;
                    per_class[l] += 1;
                }
                let n = labels.len() as f64;
                let class_conditional = joint
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&per_class)
                            .map(|(&j, &t)| if t == 0 { 0.0 } else { j as f64 / t as f64 })
                            .collect()
                    })
                    .collect();
                let rates = |counts: &[usize], total: f64| -> Vec<f64> {
                    if task == TaskKind::BinaryClassification {
                        alloc::vec![counts.get(1).copied().unwrap_or(0) as f64 / total]
                    } else {
                        counts.iter().map(|&c| c as f64 / total).collect()
                    }
                };
                let prior = rates(&per_class, n);
                let conditional = joint
                    .iter()
                    .zip(domain.frequencies())
                    .map(|(row, &f)| rates(row, f as f64))
                    .collect();
                (prior, conditional, class_conditional)
            }
        };
        Ok(Self {
            task,
            shrinkage,
            prior,
            conditional,
            class_conditional,
        })
    }

    pub fn output_dim(&self) -> usize {
        self.prior.len()
    }

    /// Shrunk conditional mean `λ(n)·E[y|v] + (1 − λ(n))·E[y]`. An unseen
    /// category (`index = None`, `n = 0`) gets the prior.
    pub fn encode_target(&self, index: Option<usize>, n: usize) -> Vec<f64> {
        match index {
            None => self.prior.clone(),
            Some(i) => {
                let lambda = shrinkage_weight(n, self.shrinkage);
                self.conditional[i]
                    .iter()
                    .zip(&self.prior)
                    .map(|(c, p)| lambda * c + (1.0 - lambda) * p)
                    .collect()
            }
        }
    }

    /// `P(d = v | y = c)` for every class; zeros for an unseen category.
    pub fn encode_mdv(&self, index: Option<usize>) -> Result<Vec<f64>> {
        if self.task == TaskKind::Regression {
            return Err(Error::MdvRequiresClassification);
        }
        let nc = self.class_conditional.first().map_or(0, Vec::len);
        Ok(match index {
            None => alloc::vec![0.0; nc],
            Some(i) => self.class_conditional[i].clone(),
        })
    }
}

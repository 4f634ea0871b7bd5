//! Supervised targets and task kinds.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Regression,
    BinaryClassification,
    MulticlassClassification,
}

impl TaskKind {
    pub fn is_classification(self) -> bool {
        !matches!(self, TaskKind::Regression)
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskKind::Regression => "regression",
            TaskKind::BinaryClassification => "binary-clf",
            TaskKind::MulticlassClassification => "multiclass-clf",
        })
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regression" => Ok(TaskKind::Regression),
            "binary-clf" | "binary" => Ok(TaskKind::BinaryClassification),
            "multiclass-clf" | "multiclass" => Ok(TaskKind::MulticlassClassification),
            other => Err(Error::InvalidParameter(alloc::format!(
                "unknown task kind `{other}` (expected regression, binary-clf or multiclass-clf)"
            ))),
        }
    }
}

/// Target column of a supervised task.
///
/// Class labels are indices into `names`; for binary tasks index 1 is the
/// positive class.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Continuous(Vec<f64>),
    Classes { labels: Vec<usize>, names: Vec<String> },
}

impl Target {
    /// Builds a classification target. Class names are sorted so that label
    /// indices do not depend on row order.
    pub fn from_class_names<S: AsRef<str>>(values: &[S]) -> Self {
        let mut names: Vec<String> = values.iter().map(|v| String::from(v.as_ref())).collect();
        names.sort();
        names.dedup();
        let labels = values
            .iter()
            .map(|v| names.binary_search_by(|n| n.as_str().cmp(v.as_ref())).unwrap())
            .collect();
        Target::Classes { labels, names }
    }

    pub fn len(&self) -> usize {
        match self {
            Target::Continuous(y) => y.len(),
            Target::Classes { labels, .. } => labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> TaskKind {
        match self {
            Target::Continuous(_) => TaskKind::Regression,
            Target::Classes { names, .. } if names.len() <= 2 => TaskKind::BinaryClassification,
            Target::Classes { .. } => TaskKind::MulticlassClassification,
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            Target::Continuous(_) => 0,
            Target::Classes { names, .. } => names.len(),
        }
    }

    pub fn select(&self, idx: &[usize]) -> Target {
        match self {
            Target::Continuous(y) => Target::Continuous(idx.iter().map(|&i| y[i]).collect()),
            Target::Classes { labels, names } => Target::Classes {
                labels: idx.iter().map(|&i| labels[i]).collect(),
                names: names.clone(),
            },
        }
    }

    /// Values as reals: the continuous target, or the positive-class indicator
    /// for classification targets.
    pub fn as_real(&self) -> Vec<f64> {
        match self {
            Target::Continuous(y) => y.clone(),
            Target::Classes { labels, .. } => labels.iter().map(|&l| (l == 1) as u8 as f64).collect(),
        }
    }
}

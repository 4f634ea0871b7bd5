use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::target::Target;

/// An ingested dataset: one dirty categorical column under study, other
/// categorical columns (one-hot encoded), numerical columns and the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub dirty_name: String,
    pub dirty: Vec<String>,
    pub categoricals: Vec<(String, Vec<String>)>,
    pub numericals: Vec<(String, Vec<f64>)>,
    pub target_name: String,
    pub target: Target,
}

impl Table {
    pub fn new(dirty_name: impl Into<String>, dirty: Vec<String>, target_name: impl Into<String>, target: Target) -> Self {
        Self {
            dirty_name: dirty_name.into(),
            dirty,
            categoricals: Vec::new(),
            numericals: Vec::new(),
            target_name: target_name.into(),
            target,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.dirty.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_rows();
        if n == 0 {
            return Err(Error::EmptyInput("table"));
        }
        let lens = self
            .categoricals
            .iter()
            .map(|(_, c)| c.len())
            .chain(self.numericals.iter().map(|(_, c)| c.len()))
            .chain(core::iter::once(self.target.len()));
        for len in lens {
            if len != n {
                return Err(Error::LengthMismatch { expected: n, got: len });
            }
        }
        Ok(())
    }

    pub fn select(&self, idx: &[usize]) -> Table {
        let pick_s = |c: &Vec<String>| idx.iter().map(|&i| c[i].clone()).collect();
        Table {
            dirty_name: self.dirty_name.clone(),
            dirty: pick_s(&self.dirty),
            categoricals: self.categoricals.iter().map(|(n, c)| (n.clone(), pick_s(c))).collect(),
            numericals: self
                .numericals
                .iter()
                .map(|(n, c)| (n.clone(), idx.iter().map(|&i| c[i]).collect()))
                .collect(),
            target_name: self.target_name.clone(),
            target: self.target.select(idx),
        }
    }
}

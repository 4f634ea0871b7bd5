use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// The training vocabulary of a categorical column: distinct categories in
/// first-appearance order with their occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryDomain {
    categories: Vec<String>,
    frequencies: Vec<usize>,
    index: BTreeMap<String, usize>,
}

impl CategoryDomain {
    pub fn from_column<S: AsRef<str>>(column: &[S]) -> Result<Self> {
        if column.is_empty() {
            return Err(Error::EmptyInput("categorical column"));
        }
        let mut categories = Vec::new();
        let mut frequencies: Vec<usize> = Vec::new();
        let mut index = BTreeMap::new();
        for v in column {
            let v = v.as_ref();
            match index.get(v) {
                Some(&i) => frequencies[i] += 1,
                None => {
                    index.insert(String::from(v), categories.len());
                    categories.push(String::from(v));
                    frequencies.push(1);
                }
            }
        }
        Ok(Self {
            categories,
            frequencies,
            index,
        })
    }

    pub fn from_parts(categories: Vec<String>, frequencies: Vec<usize>) -> Result<Self> {
        if categories.is_empty() {
            return Err(Error::EmptyInput("category domain"));
        }
        if categories.len() != frequencies.len() {
            return Err(Error::LengthMismatch {
                expected: categories.len(),
                got: frequencies.len(),
            });
        }
        if frequencies.contains(&0) {
            return Err(Error::InvalidParameter("category frequencies must be >= 1".into()));
        }
        let mut index = BTreeMap::new();
        for (i, c) in categories.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(Error::InvalidParameter(alloc::format!("duplicate category `{c}`")));
            }
        }
        Ok(Self {
            categories,
            frequencies,
            index,
        })
    }

    /// Cardinality `k`.
    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn frequencies(&self) -> &[usize] {
        &self.frequencies
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Occurrences of `v` in the training column; 0 when unseen.
    pub fn frequency_of(&self, v: &str) -> usize {
        self.index_of(v).map_or(0, |i| self.frequencies[i])
    }

    pub fn total_count(&self) -> usize {
        self.frequencies.iter().sum()
    }
}

use alloc::string::String;
use alloc::vec::Vec;

use crate::encoders::{EncoderSpec, FittedEncoder};
use crate::error::Result;
use crate::matrix::FeatureMatrix;

use super::table::Table;

/// Per-column scaling to unit variance, optionally with mean-centering.
/// Constant columns are left untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    pub scale: Vec<f64>,
    pub mean: Option<Vec<f64>>,
}

impl Scaler {
    /// Population (divide-by-n) statistics of the training matrix.
    pub fn fit(x: &FeatureMatrix, center: bool) -> Self {
        let (n, p) = x.shape();
        let mut mean = alloc::vec![0.0; p];
        for i in 0..n {
            for (m, v) in mean.iter_mut().zip(x.row(i)) {
                *m += v;
            }
        }
        for m in mean.iter_mut() {
            *m /= n.max(1) as f64;
        }
        let mut var = alloc::vec![0.0; p];
        let mut constant = alloc::vec![true; p];
        for i in 0..n {
            for (j, v) in x.row(i).iter().enumerate() {
                let d = v - mean[j];
                var[j] += d * d;
                if *v != x.get(0, j) {
                    constant[j] = false;
                }
            }
        }
        let scale = var
            .iter()
            .zip(&constant)
            .map(|(v, &c)| if c { 1.0 } else { libm::sqrt(v / n as f64) })
            .collect();
        let mean = center.then(|| mean.iter().zip(&constant).map(|(m, &c)| if c { 0.0 } else { *m }).collect());
        Self { scale, mean }
    }

    pub fn apply(&self, x: &mut FeatureMatrix) {
        for i in 0..x.rows() {
            let row = x.row_mut(i);
            if let Some(mean) = &self.mean {
                for (v, m) in row.iter_mut().zip(mean) {
                    *v -= m;
                }
            }
            for (v, s) in row.iter_mut().zip(&self.scale) {
                *v /= s;
            }
        }
    }
}

/// Builds the feature matrix of a table: the dirty column's encoding, one-hot
/// encodings of the other categorical columns and the raw numerical columns,
/// then scaled with statistics of the training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureAssembler {
    pub dirty: FittedEncoder,
    pub others: Vec<(String, FittedEncoder)>,
    pub numericals: Vec<String>,
    pub scaler: Scaler,
}

impl FeatureAssembler {
    /// `train` must hold training rows only; `dirty` must be fitted on them.
    pub fn fit(train: &Table, dirty: FittedEncoder, center: bool) -> Result<Self> {
        train.validate()?;
        let others = train
            .categoricals
            .iter()
            .map(|(name, col)| Ok((name.clone(), FittedEncoder::fit(EncoderSpec::OneHot, col, None)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut this = Self {
            dirty,
            others,
            numericals: train.numericals.iter().map(|(n, _)| n.clone()).collect(),
            scaler: Scaler {
                scale: Vec::new(),
                mean: None,
            },
        };
        let raw = this.raw(train)?;
        this.scaler = Scaler::fit(&raw, center);
        Ok(this)
    }

    fn raw(&self, table: &Table) -> Result<FeatureMatrix> {
        let mut blocks = Vec::with_capacity(2 + self.others.len());
        let mut dirty = self.dirty.transform(&table.dirty);
        for l in dirty.labels_mut() {
            *l = alloc::format!("{}|{l}", table.dirty_name);
        }
        blocks.push(dirty);
        for ((name, enc), (_, col)) in self.others.iter().zip(&table.categoricals) {
            let mut b = enc.transform(col);
            for l in b.labels_mut() {
                *l = alloc::format!("{name}|{l}");
            }
            blocks.push(b);
        }
        if !self.numericals.is_empty() {
            let n = table.n_rows();
            let p = table.numericals.len();
            let mut num = FeatureMatrix::zeros(n, p);
            for (j, (_, col)) in table.numericals.iter().enumerate() {
                for (i, v) in col.iter().enumerate() {
                    num.set(i, j, *v);
                }
            }
            blocks.push(num.with_labels(self.numericals.clone())?);
        }
        let refs: Vec<&FeatureMatrix> = blocks.iter().collect();
        FeatureMatrix::hstack(&refs)
    }

    pub fn transform(&self, table: &Table) -> Result<FeatureMatrix> {
        let mut x = self.raw(table)?;
        self.scaler.apply(&mut x);
        Ok(x)
    }

    pub fn n_features(&self) -> usize {
        self.scaler.scale.len()
    }
}

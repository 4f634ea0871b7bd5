//! CSV ingestion into a typed table.

use std::collections::BTreeSet;
use std::path::Path;

use dirtyenc_core::pipeline::Table;
use dirtyenc_core::rng::{derive_seed, permutation};
use dirtyenc_core::{Target, TaskKind};

use crate::error::{CliError, CliResult};

const SAMPLE_STREAM: u64 = 0x5a;
/// Numeric targets with more distinct values than this are treated as regression.
const MAX_INFERRED_CLASSES: usize = 10;

/// A CSV file with a header row.
#[derive(Debug, Clone)]
pub struct RawCsv {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawCsv {
    pub fn read(path: &Path) -> CliResult<Self> {
        let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
        Self::from_reader(file).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }

    pub fn from_reader<R: std::io::Read>(r: R) -> Result<Self, csv::Error> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let headers = reader.headers()?.iter().map(str::to_string).collect();
        let rows = reader
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Self { headers, rows })
    }

    fn index(&self, name: &str) -> CliResult<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("column `{name}` not found (have: {})", self.headers.join(", "))))
    }
}

/// Column roles of a dataset.
#[derive(Debug, Clone, Default)]
pub struct Roles {
    pub column: String,
    pub target: Option<String>,
    pub task: Option<TaskKind>,
    pub categoricals: Vec<String>,
    pub numericals: Vec<String>,
    pub sample_cap: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub dirty_name: String,
    pub dirty: Vec<String>,
    /// 0-based data row (header excluded) each kept row came from.
    pub source_rows: Vec<usize>,
    pub target: Option<(String, Target, TaskKind)>,
    pub categoricals: Vec<(String, Vec<String>)>,
    pub numericals: Vec<(String, Vec<f64>)>,
    pub dropped: usize,
}

impl Ingested {
    pub fn n_rows(&self) -> usize {
        self.dirty.len()
    }

    pub fn task(&self) -> Option<TaskKind> {
        self.target.as_ref().map(|t| t.2)
    }

    /// Fails when no target was declared.
    pub fn into_table(self) -> CliResult<(Table, TaskKind)> {
        let (name, target, task) = self
            .target
            .ok_or_else(|| CliError::Config("a target column is required (--target)".into()))?;
        let mut t = Table::new(self.dirty_name, self.dirty, name, target);
        t.categoricals = self.categoricals;
        t.numericals = self.numericals;
        t.validate().map_err(CliError::data)?;
        Ok((t, task))
    }
}

fn missing(v: &str) -> bool {
    v.trim().is_empty()
}

/// Infers the task of a target column: many distinct numbers → regression,
/// two values → binary, otherwise multiclass.
pub fn infer_task(values: &[&str]) -> TaskKind {
    let distinct: BTreeSet<&str> = values.iter().copied().collect();
    let numeric = values.iter().all(|v| v.trim().parse::<f64>().is_ok());
    if numeric && distinct.len() > MAX_INFERRED_CLASSES {
        TaskKind::Regression
    } else if distinct.len() == 2 {
        TaskKind::BinaryClassification
    } else {
        TaskKind::MulticlassClassification
    }
}

/// Applies the column roles: drops rows with a missing target or a missing
/// non-dirty explanatory value, fills missing dirty values with `nan`,
/// lowercases the dirty column, parses numericals and the target, then
/// subsamples to the sample cap.
pub fn ingest(raw: &RawCsv, roles: &Roles, seed: u64) -> CliResult<Ingested> {
    let dirty_i = raw.index(&roles.column)?;
    let target_i = roles.target.as_deref().map(|t| raw.index(t)).transpose()?;
    let cat_i = roles.categoricals.iter().map(|c| raw.index(c)).collect::<CliResult<Vec<_>>>()?;
    let num_i = roles.numericals.iter().map(|c| raw.index(c)).collect::<CliResult<Vec<_>>>()?;

    let mut kept: Vec<usize> = (0..raw.rows.len())
        .filter(|&r| {
            let row = &raw.rows[r];
            target_i.iter().chain(&cat_i).chain(&num_i).all(|&c| !missing(&row[c]))
        })
        .collect();
    let dropped = raw.rows.len() - kept.len();
    if let Some(cap) = roles.sample_cap {
        if kept.len() > cap {
            let perm = permutation(kept.len(), derive_seed(seed, SAMPLE_STREAM));
            let mut chosen: Vec<usize> = perm[..cap].iter().map(|&p| kept[p]).collect();
            chosen.sort_unstable();
            kept = chosen;
        }
    }
    if kept.is_empty() {
        return Err(CliError::Data("no usable rows".into()));
    }

    let dirty = kept
        .iter()
        .map(|&r| {
            let v = &raw.rows[r][dirty_i];
            if missing(v) {
                "nan".to_string()
            } else {
                v.to_lowercase()
            }
        })
        .collect();
    let text_column = |c: usize| kept.iter().map(|&r| raw.rows[r][c].clone()).collect::<Vec<_>>();
    let categoricals = roles.categoricals.iter().cloned().zip(cat_i.iter().map(|&c| text_column(c))).collect();
    let mut numericals = Vec::with_capacity(num_i.len());
    for (name, &c) in roles.numericals.iter().zip(&num_i) {
        let col = kept
            .iter()
            .map(|&r| parse_number(&raw.rows[r][c], name, r))
            .collect::<CliResult<Vec<_>>>()?;
        numericals.push((name.clone(), col));
    }
    let target = match (roles.target.as_ref(), target_i) {
        (Some(name), Some(c)) => {
            let values: Vec<&str> = kept.iter().map(|&r| raw.rows[r][c].trim()).collect();
            let task = roles.task.unwrap_or_else(|| {
                let t = infer_task(&values);
                log::info!("inferred task `{t}` from target `{name}`");
                t
            });
            let target = match task {
                TaskKind::Regression => Target::Continuous(
                    kept.iter()
                        .map(|&r| parse_number(&raw.rows[r][c], name, r))
                        .collect::<CliResult<_>>()?,
                ),
                _ => Target::from_class_names(&values),
            };
            Some((name.clone(), target, task))
        }
        _ => None,
    };
    Ok(Ingested {
        dirty_name: roles.column.clone(),
        dirty,
        source_rows: kept,
        target,
        categoricals,
        numericals,
        dropped,
    })
}

fn parse_number(v: &str, column: &str, row: usize) -> CliResult<f64> {
    match v.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::Data(format!("column `{column}`, data row {row}: `{v}` is not a finite number"))),
    }
}

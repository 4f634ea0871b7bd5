//! Result files. Floats are written in their shortest round-trip form, so
//! identical runs give identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use dirtyenc_core::pipeline::BenchmarkResult;
use dirtyenc_core::similarity::SimilarityHistogram;
use dirtyenc_core::FeatureMatrix;

use crate::error::{CliError, CliResult};

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes a CSV from a header and string rows.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let io = |e: csv::Error| CliError::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r.into_iter().collect::<Vec<_>>()).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Feature matrix with its provenance labels as the header row.
pub fn write_features(path: &Path, x: &FeatureMatrix) -> CliResult<()> {
    let header: Vec<&str> = x.labels().iter().map(String::as_str).collect();
    write_csv(path, &header, (0..x.rows()).map(|i| x.row(i).iter().map(f64::to_string).collect::<Vec<_>>()))
}

/// `results.csv`, `summary.csv` and the long-format `boxplot.csv`.
pub fn write_benchmark(dir: &Path, dataset: &str, result: &BenchmarkResult) -> CliResult<Vec<PathBuf>> {
    let results = dir.join("results.csv");
    write_csv(
        &results,
        &["method", "split", "score"],
        result.methods.iter().zip(&result.scores).flat_map(|(m, s)| {
            s.iter()
                .enumerate()
                .map(move |(i, v)| vec![m.clone(), i.to_string(), v.to_string()])
        }),
    )?;
    let summary = dir.join("summary.csv");
    write_csv(
        &summary,
        &["method", "median", "mean", "average_rank"],
        (0..result.methods.len()).map(|m| {
            vec![
                result.methods[m].clone(),
                result.medians[m].to_string(),
                result.means[m].to_string(),
                result.ranks[m].to_string(),
            ]
        }),
    )?;
    let boxplot = dir.join("boxplot.csv");
    let task = result.task.to_string();
    write_csv(
        &boxplot,
        &["dataset", "task", "method", "split", "score", "median"],
        (0..result.methods.len()).flat_map(|m| {
            let task = task.clone();
            result.scores[m].iter().enumerate().map(move |(s, v)| {
                vec![
                    dataset.to_string(),
                    task.clone(),
                    result.methods[m].clone(),
                    s.to_string(),
                    v.to_string(),
                    result.medians[m].to_string(),
                ]
            })
        }),
    )?;
    Ok(vec![results, summary, boxplot])
}

/// `bin_left  bin_right  count` rows, then `median  <value>`.
pub fn histogram_tsv(h: &SimilarityHistogram) -> String {
    let mut out = String::from("bin_left\tbin_right\tcount\n");
    for (b, c) in h.counts.iter().enumerate() {
        out.push_str(&format!("{}\t{}\t{c}\n", h.edges[b], h.edges[b + 1]));
    }
    out.push_str(&format!("median\t{}\n", h.median));
    out
}

pub fn cardinality_tsv(curve: &[(usize, usize)]) -> String {
    let mut out = String::from("samples\tcategories\n");
    for (n, k) in curve {
        out.push_str(&format!("{n}\t{k}\n"));
    }
    out
}

/// File-name-safe form of a method or measure label.
pub fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng;

/// Distinct-category counts over growing prefixes of the shuffled column.
pub fn cardinality_curve<S: AsRef<str>>(column: &[S], checkpoints: &[usize], seed: u64) -> Result<Vec<(usize, usize)>> {
    if checkpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("checkpoints must be sorted ascending".into()));
    }
    if let Some(&last) = checkpoints.last() {
        if last > column.len() {
            return Err(Error::TooMany {
                requested: last,
                available: column.len(),
            });
        }
    }
    let order = rng::permutation(column.len(), seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut consumed = 0;
    for &cp in checkpoints {
        while consumed < cp {
            seen.insert(column[order[consumed]].as_ref());
            consumed += 1;
        }
        out.push((cp, seen.len()));
    }
    Ok(out)
}

/// About `count` geometrically spaced sample counts from 1 to `n`
/// (deduplicated, always ending at `n`).
pub fn log_spaced_checkpoints(n: usize, count: usize) -> Vec<usize> {
    if n == 0 || count == 0 {
        return Vec::new();
    }
    let mut out: Vec<usize> = (0..count)
        .map(|i| {
            let t = if count == 1 { 1.0 } else { i as f64 / (count - 1) as f64 };
            libm::round(libm::pow(n as f64, t)) as usize
        })
        .map(|v| v.clamp(1, n))
        .collect();
    out.push(n);
    out.sort_unstable();
    out.dedup();
    out
}

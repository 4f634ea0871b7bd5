use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng;

fn test_count(n: usize, test_fraction: f64) -> usize {
    let t = libm::round(n as f64 * test_fraction) as usize;
    t.clamp(1, n - 1)
}

/// Random train/test partition of `0..n`, both halves sorted.
///
/// With `stratify`, every class is split on its own so that its test share is
/// within one sample of `test_fraction`; each class then needs two members.
pub fn train_test_split(
    n: usize,
    test_fraction: f64,
    stratify: Option<&[usize]>,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if n < 2 {
        return Err(Error::InvalidParameter("a split needs at least 2 rows".into()));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter("test fraction must lie in (0, 1)".into()));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    match stratify {
        None => {
            let perm = rng::permutation(n, seed);
            let t = test_count(n, test_fraction);
            test.extend_from_slice(&perm[..t]);
            train.extend_from_slice(&perm[t..]);
        }
        Some(labels) => {
            if labels.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: labels.len(),
                });
            }
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, &l) in labels.iter().enumerate() {
                groups.entry(l).or_default().push(i);
            }
            for (&class, members) in &groups {
                if members.len() < 2 {
                    return Err(Error::ClassTooSmall {
                        class,
                        count: members.len(),
                    });
                }
                let perm = rng::permutation(members.len(), rng::derive_seed(seed, class as u64));
                let t = test_count(members.len(), test_fraction);
                test.extend(perm[..t].iter().map(|&p| members[p]));
                train.extend(perm[t..].iter().map(|&p| members[p]));
            }
        }
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

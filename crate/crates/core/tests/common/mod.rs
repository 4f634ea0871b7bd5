//! Reference implementations used to check the library. Apart from calling
//! the function being checked, none of them share code with the crate.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dirtyenc_core::learners::logistic_loss_and_gradient;
use dirtyenc_core::FeatureMatrix;

/// All strings over `alphabet` of length `0..=max_len`.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &c in alphabet {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Cheapest edit sequence from `source` to every string of length at most
/// `max_len`, found by Dijkstra over single insert (1), delete (1) and
/// replace (2) moves.
pub fn edit_search_from(source: &str, alphabet: &[char], max_len: usize) -> HashMap<String, u32> {
    let mut dist: HashMap<String, u32> = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(source.to_string(), 0);
    heap.push(Reverse((0u32, source.to_string())));
    while let Some(Reverse((d, s))) = heap.pop() {
        if dist.get(&s).is_some_and(|&best| best < d) {
            continue;
        }
        let chars: Vec<char> = s.chars().collect();
        let mut moves: Vec<(String, u32)> = Vec::new();
        for i in 0..chars.len() {
            let mut t = chars.clone();
            t.remove(i);
            moves.push((t.into_iter().collect(), 1));
            for &c in alphabet {
                if c != chars[i] {
                    let mut t = chars.clone();
                    t[i] = c;
                    moves.push((t.into_iter().collect(), 2));
                }
            }
        }
        if chars.len() < max_len {
            for i in 0..=chars.len() {
                for &c in alphabet {
                    let mut t = chars.clone();
                    t.insert(i, c);
                    moves.push((t.into_iter().collect(), 1));
                }
            }
        }
        for (t, cost) in moves {
            let nd = d + cost;
            if dist.get(&t).is_none_or(|&old| nd < old) {
                dist.insert(t.clone(), nd);
                heap.push(Reverse((nd, t)));
            }
        }
    }
    dist
}

/// Longest common subsequence by enumerating the subsequences of `a`.
pub fn lcs_brute(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let is_subseq = |sub: &[char]| {
        let mut it = b.iter();
        sub.iter().all(|c| it.any(|x| x == c))
    };
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let sub: Vec<char> = (0..a.len()).filter(|&i| mask & (1 << i) != 0).map(|i| a[i]).collect();
        if sub.len() > best && is_subseq(&sub) {
            best = sub.len();
        }
    }
    best
}

/// Jaro similarity from its textbook definition: characters of `s1` are
/// matched left to right to the first free equal character of `s2` within the
/// window, and transpositions are half the out-of-order matches, rounded down.
pub fn jaro_reference(s1: &str, s2: &str) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut used = vec![false; b.len()];
    let mut a_matched = Vec::new();
    for (i, &c) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        if let Some(j) = (lo..hi).find(|&j| !used[j] && b[j] == c) {
            used[j] = true;
            a_matched.push(c);
        }
    }
    let m = a_matched.len();
    if m == 0 {
        return 0.0;
    }
    let b_matched: Vec<char> = (0..b.len()).filter(|&j| used[j]).map(|j| b[j]).collect();
    let out_of_order = a_matched.iter().zip(&b_matched).filter(|(x, y)| x != y).count();
    let t = (out_of_order / 2) as f64;
    let m = m as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Character n-gram set by sliding a window over the scalar values.
pub fn gram_set(s: &str, n: usize) -> BTreeSet<String> {
    let c: Vec<char> = s.chars().collect();
    if c.len() < n {
        return BTreeSet::new();
    }
    c.windows(n).map(|w| w.iter().collect()).collect()
}

pub fn random_string(rng: &mut ChaCha8Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Squared Euclidean distance, summed left to right.
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Minimal within-cluster inertia over all partitions of `points` into two
/// non-empty groups, with the minimizing memberships (bit i set = group 1).
pub fn best_two_partitions(points: &[Vec<f64>]) -> (f64, Vec<u64>) {
    let n = points.len();
    let inertia = |mask: u64| {
        let mut total = 0.0;
        for side in [0, 1] {
            let members: Vec<&Vec<f64>> = (0..n).filter(|&i| ((mask >> i) & 1) as usize == side).map(|i| &points[i]).collect();
            let p = points[0].len();
            let mean: Vec<f64> = (0..p).map(|j| members.iter().map(|m| m[j]).sum::<f64>() / members.len() as f64).collect();
            total += members.iter().map(|m| sq_dist(m, &mean)).sum::<f64>();
        }
        total
    };
    let mut best = f64::INFINITY;
    let mut argmin = Vec::new();
    // Fixing point 0 in group 0 enumerates each partition once.
    for mask in (2..(1u64 << n)).step_by(2) {
        let v = inertia(mask);
        if v < best - 1e-12 {
            best = v;
            argmin = vec![mask];
        } else if (v - best).abs() <= 1e-12 {
            argmin.push(mask);
        }
    }
    (best, argmin)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> FeatureMatrix {
    FeatureMatrix::from_vec(n, p, (0..n * p).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap()
}

/// Relative residual of `(X̃ᵀX̃ + λI) w = X̃ᵀỹ` on centered data, computed
/// with plain loops.
pub fn normal_equation_residual(x: &FeatureMatrix, y: &[f64], lambda: f64, w: &[f64]) -> f64 {
    let (n, p) = x.shape();
    let means: Vec<f64> = (0..p).map(|j| (0..n).map(|i| x.get(i, j)).sum::<f64>() / n as f64).collect();
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let xc = |i: usize, j: usize| x.get(i, j) - means[j];
    let mut num = 0.0;
    let mut den = 0.0;
    for a in 0..p {
        let mut lhs = lambda * w[a];
        for b in 0..p {
            let g: f64 = (0..n).map(|i| xc(i, a) * xc(i, b)).sum();
            lhs += g * w[b];
        }
        let rhs: f64 = (0..n).map(|i| xc(i, a) * (y[i] - y_mean)).sum();
        num += (lhs - rhs).powi(2);
        den += rhs * rhs;
    }
    (num / den).sqrt()
}

/// Largest relative gap between the analytic logistic gradient and central
/// differences of the loss, over every weight and intercept.
pub fn central_difference_error(
    x: &FeatureMatrix,
    labels: &[usize],
    weights: &FeatureMatrix,
    intercepts: &[f64],
    reg: f64,
) -> f64 {
    let sw: Vec<f64> = (0..x.rows()).map(|i| 1.0 + (i % 3) as f64 * 0.5).collect();
    let (_, gw, gb) = logistic_loss_and_gradient(x, labels, &sw, weights, intercepts, reg).unwrap();
    let loss_at = |w: &FeatureMatrix, b: &[f64]| logistic_loss_and_gradient(x, labels, &sw, w, b, reg).unwrap().0;
    let h = 1e-5;
    let rel = |analytic: f64, numeric: f64| (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-3);
    let mut worst: f64 = 0.0;
    for c in 0..weights.rows() {
        for j in 0..weights.cols() {
            let (mut up, mut down) = (weights.clone(), weights.clone());
            up.set(c, j, weights.get(c, j) + h);
            down.set(c, j, weights.get(c, j) - h);
            let numeric = (loss_at(&up, intercepts) - loss_at(&down, intercepts)) / (2.0 * h);
            worst = worst.max(rel(gw.get(c, j), numeric));
        }
        let (mut up, mut down) = (intercepts.to_vec(), intercepts.to_vec());
        up[c] += h;
        down[c] -= h;
        let numeric = (loss_at(weights, &up) - loss_at(weights, &down)) / (2.0 * h);
        worst = worst.max(rel(gb[c], numeric));
    }
    worst
}

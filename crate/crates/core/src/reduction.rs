//! Dimensionality reduction of encoded matrices: Gaussian random projections,
//! prototype selection (most frequent categories or k-means), and the k-means
//! merge of categories used as a deduplication baseline.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::encoders::{CategoryDomain, EncoderSpec, EncoderState, FittedEncoder};
use crate::error::{Error, Result};
use crate::matrix::{squared_distance, FeatureMatrix};
use crate::rng;
use crate::similarity::{pairwise_similarity, SimilarityMeasure};

/// Category instances used to fit prototype clusterings.
pub const DEFAULT_SUBSAMPLE: usize = 3000;
pub const DEFAULT_MAX_ITER: usize = 100;

/// A `p × d` projection. Gaussian matrices are regenerated from their seed,
/// so only `(p, d, seed)` needs to be stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    input_dim: usize,
    output_dim: usize,
    seed: Option<u64>,
    entries: Vec<f64>,
}

impl ProjectionMatrix {
    /// Entries drawn i.i.d. from `N(0, 1/d)` in row-major order.
    pub fn gaussian(input_dim: usize, output_dim: usize, seed: u64) -> Result<Self> {
        if output_dim == 0 || input_dim == 0 {
            return Err(Error::InvalidParameter("projection dimensions must be >= 1".into()));
        }
        let normal = Normal::new(0.0, libm::sqrt(1.0 / output_dim as f64))
            .map_err(|e| Error::InvalidParameter(alloc::format!("{e}")))?;
        let mut rng = rng::seeded(seed);
        let entries = (0..input_dim * output_dim).map(|_| normal.sample(&mut rng)).collect();
        Ok(Self {
            input_dim,
            output_dim,
            seed: Some(seed),
            entries,
        })
    }

    /// The `p × p` identity. Useful to check the projection plumbing.
    pub fn identity(dim: usize) -> Self {
        let mut entries = alloc::vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self {
            input_dim: dim,
            output_dim: dim,
            seed: None,
            entries,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    /// `None` for the identity.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `x · R`.
    pub fn project(&self, x: &FeatureMatrix) -> Result<FeatureMatrix> {
        let r = FeatureMatrix::from_vec(self.input_dim, self.output_dim, self.entries.clone())?;
        x.matmul(&r)
    }
}

/// Projects the rows of `x` onto `d` Gaussian random directions.
pub fn random_projection(x: &FeatureMatrix, d: usize, seed: u64) -> Result<FeatureMatrix> {
    ProjectionMatrix::gaussian(x.cols(), d, seed)?.project(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrototypeMethod {
    MostFrequent,
    KMeans,
}

impl fmt::Display for PrototypeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrototypeMethod::MostFrequent => "most_frequent",
            PrototypeMethod::KMeans => "kmeans",
        })
    }
}

impl FromStr for PrototypeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "most_frequent" => Ok(PrototypeMethod::MostFrequent),
            "kmeans" => Ok(PrototypeMethod::KMeans),
            _ => Err(Error::InvalidParameter(alloc::format!("unknown prototype method `{s}`"))),
        }
    }
}

/// Distinct training categories used as reference columns of a reduced
/// similarity encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrototypeSet {
    pub prototypes: Vec<String>,
    pub method: PrototypeMethod,
}

impl PrototypeSet {
    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }
}

fn check_reduction_dim(d: usize, k: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("reduction dimension must be >= 1".into()));
    }
    if d > k {
        return Err(Error::TooMany {
            requested: d,
            available: k,
        });
    }
    Ok(())
}

/// The `d` most frequent categories, ties broken lexicographically.
pub fn most_frequent_prototypes(domain: &CategoryDomain, d: usize) -> Result<PrototypeSet> {
    check_reduction_dim(d, domain.len())?;
    let cats = domain.categories();
    let freqs = domain.frequencies();
    let mut order: Vec<usize> = (0..domain.len()).collect();
    order.sort_by(|&a, &b| freqs[b].cmp(&freqs[a]).then_with(|| cats[a].cmp(&cats[b])));
    Ok(PrototypeSet {
        prototypes: order[..d].iter().map(|&i| cats[i].clone()).collect(),
        method: PrototypeMethod::MostFrequent,
    })
}

/// Result of Lloyd's algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansModel {
    pub k: usize,
    /// `k × p` matrix of centers.
    pub centers: FeatureMatrix,
    pub assignments: Vec<usize>,
    /// Weighted within-cluster sum of squared distances at the final assignment.
    pub inertia: f64,
    /// Inertia after every assignment step.
    pub inertia_history: Vec<f64>,
    pub iterations: usize,
    pub seed: u64,
    pub max_iter: usize,
}

pub fn kmeans(points: &FeatureMatrix, k: usize, seed: u64, max_iter: usize) -> Result<KMeansModel> {
    kmeans_weighted(points, None, k, seed, max_iter)
}

/// Weighted Lloyd iterations from greedy farthest-point seeding.
///
/// The first center is a uniformly drawn point; each further center is the
/// point farthest from the centers chosen so far. Iteration stops when the
/// assignment is stable or after `max_iter` assignment steps. A cluster left
/// empty is re-seeded at the point farthest from its own center.
pub fn kmeans_weighted(
    points: &FeatureMatrix,
    weights: Option<&[f64]>,
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<KMeansModel> {
    let (n, p) = points.shape();
    if k == 0 || max_iter == 0 {
        return Err(Error::InvalidParameter("kmeans needs k >= 1 and max_iter >= 1".into()));
    }
    if k > n {
        return Err(Error::TooMany {
            requested: k,
            available: n,
        });
    }
    let unit;
    let weights = match weights {
        Some(w) => {
            if w.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: w.len() });
            }
            if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::InvalidParameter("kmeans weights must be positive".into()));
            }
            w
        }
        None => {
            unit = alloc::vec![1.0; n];
            &unit[..]
        }
    };

    let mut centers = FeatureMatrix::zeros(k, p);
    let mut rng = rng::seeded(seed);
    let first = rng.random_range(0..n);
    centers.row_mut(0).copy_from_slice(points.row(first));
    let mut chosen = alloc::vec![false; n];
    chosen[first] = true;
    let mut nearest: Vec<f64> = (0..n).map(|i| squared_distance(points.row(i), points.row(first))).collect();
    for c in 1..k {
        let mut best = None;
        for i in 0..n {
            if chosen[i] {
                continue;
            }
            if best.is_none_or(|(_, d)| nearest[i] > d) {
                best = Some((i, nearest[i]));
            }
        }
        let (pick, _) = best.expect("k <= n leaves an unchosen point");
        chosen[pick] = true;
        centers.row_mut(c).copy_from_slice(points.row(pick));
        for i in 0..n {
            nearest[i] = nearest[i].min(squared_distance(points.row(i), points.row(pick)));
        }
    }

    let mut assignments: Vec<usize> = Vec::new();
    let mut distances = alloc::vec![0.0; n];
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut next = Vec::with_capacity(n);
        let mut inertia = 0.0;
        for i in 0..n {
            let row = points.row(i);
            let mut best = (0, f64::INFINITY);
            for c in 0..k {
                let d = squared_distance(row, centers.row(c));
                if d < best.1 {
                    best = (c, d);
                }
            }
            next.push(best.0);
            distances[i] = best.1;
            inertia += weights[i] * best.1;
        }
        history.push(inertia);
        let stable = next == assignments;
        assignments = next;
        if stable || iterations >= max_iter {
            break;
        }

        let mut sums = FeatureMatrix::zeros(k, p);
        let mut mass = alloc::vec![0.0; k];
        for i in 0..n {
            let c = assignments[i];
            mass[c] += weights[i];
            for (s, x) in sums.row_mut(c).iter_mut().zip(points.row(i)) {
                *s += weights[i] * x;
            }
        }
        for c in 0..k {
            if mass[c] > 0.0 {
                for (dst, s) in centers.row_mut(c).iter_mut().zip(sums.row(c)) {
                    *dst = s / mass[c];
                }
            }
        }
        for c in 0..k {
            if mass[c] == 0.0 {
                let mut far = (0, -1.0);
                for (i, &d) in distances.iter().enumerate() {
                    if d > far.1 {
                        far = (i, d);
                    }
                }
                centers.row_mut(c).copy_from_slice(points.row(far.0));
                distances[far.0] = 0.0;
            }
        }
    }
    let inertia = *history.last().unwrap();
    Ok(KMeansModel {
        k,
        centers,
        assignments,
        inertia,
        inertia_history: history,
        iterations,
        seed,
        max_iter,
    })
}

/// Sampled category instances: distinct domain indices and their counts.
fn sample_instances(domain: &CategoryDomain, subsample: usize, min_points: usize, seed: u64) -> (Vec<usize>, Vec<f64>) {
    let freqs = domain.frequencies();
    let total = domain.total_count();
    if total <= subsample {
        return ((0..domain.len()).collect(), freqs.iter().map(|&f| f as f64).collect());
    }
    let mut cumulative = Vec::with_capacity(freqs.len());
    let mut acc = 0;
    for &f in freqs {
        acc += f;
        cumulative.push(acc);
    }
    let mut counts = alloc::vec![0usize; domain.len()];
    let mut rng = rng::seeded(seed);
    for inst in rand::seq::index::sample(&mut rng, total, subsample) {
        let cat = cumulative.partition_point(|&c| c <= inst);
        counts[cat] += 1;
    }
    let mut drawn = counts.iter().filter(|&&c| c > 0).count();
    // Every cluster needs a distinct candidate prototype.
    for c in counts.iter_mut() {
        if drawn >= min_points {
            break;
        }
        if *c == 0 {
            *c = 1;
            drawn += 1;
        }
    }
    let idx: Vec<usize> = (0..domain.len()).filter(|&i| counts[i] > 0).collect();
    let w = idx.iter().map(|&i| counts[i] as f64).collect();
    (idx, w)
}

struct CategoryClustering {
    /// Domain indices of the clustered points.
    points: Vec<usize>,
    rows: FeatureMatrix,
    model: KMeansModel,
}

fn cluster_categories(
    domain: &CategoryDomain,
    m: &SimilarityMeasure,
    d: usize,
    subsample: usize,
    seed: u64,
) -> Result<CategoryClustering> {
    check_reduction_dim(d, domain.len())?;
    if subsample == 0 {
        return Err(Error::InvalidParameter("subsample must be >= 1".into()));
    }
    let (points, weights) = sample_instances(domain, subsample, d, rng::derive_seed(seed, 1));
    let cats = domain.categories();
    let names: Vec<&str> = points.iter().map(|&i| cats[i].as_str()).collect();
    let rows = pairwise_similarity(&names, cats, m)?;
    let model = kmeans_weighted(&rows, Some(&weights), d, rng::derive_seed(seed, 2), DEFAULT_MAX_ITER)?;
    Ok(CategoryClustering { points, rows, model })
}

/// Prototypes chosen as the categories closest to k-means centers of
/// similarity-encoded category instances.
///
/// Up to `subsample` instances of the training column (reconstructed from the
/// domain frequencies) are drawn; duplicates become point weights. Each
/// cluster contributes the not-yet-chosen category nearest its center (ties
/// to the lowest index). Prototypes are returned in domain order.
pub fn kmeans_prototypes(
    domain: &CategoryDomain,
    m: &SimilarityMeasure,
    d: usize,
    subsample: usize,
    seed: u64,
) -> Result<PrototypeSet> {
    let cl = cluster_categories(domain, m, d, subsample, seed)?;
    let mut taken = alloc::vec![false; cl.points.len()];
    let mut picked = Vec::with_capacity(d);
    for c in 0..d {
        let center = cl.model.centers.row(c);
        let mut best: Option<(usize, f64)> = None;
        for (i, t) in taken.iter().enumerate() {
            if *t {
                continue;
            }
            let dist = squared_distance(cl.rows.row(i), center);
            if best.is_none_or(|(_, b)| dist < b) {
                best = Some((i, dist));
            }
        }
        let (i, _) = best.expect("at least d clustered points");
        taken[i] = true;
        picked.push(cl.points[i]);
    }
    picked.sort_unstable();
    Ok(PrototypeSet {
        prototypes: picked.iter().map(|&i| domain.categories()[i].clone()).collect(),
        method: PrototypeMethod::KMeans,
    })
}

/// Partitions the whole domain into `d` clusters: k-means is fitted as in
/// [`kmeans_prototypes`], then every category joins its nearest center.
/// Clusters are numbered by the first category they contain, so singleton
/// clusters reproduce one-hot column order.
pub fn cluster_domain(
    domain: &CategoryDomain,
    m: &SimilarityMeasure,
    d: usize,
    subsample: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let cl = cluster_categories(domain, m, d, subsample, seed)?;
    let k = domain.len();
    let mut raw = alloc::vec![usize::MAX; k];
    for (slot, &cat) in cl.points.iter().enumerate() {
        raw[cat] = cl.model.assignments[slot];
    }
    let missing: Vec<usize> = (0..k).filter(|&i| raw[i] == usize::MAX).collect();
    if !missing.is_empty() {
        let names: Vec<&str> = missing.iter().map(|&i| domain.categories()[i].as_str()).collect();
        let rows = pairwise_similarity(&names, domain.categories(), m)?;
        for (r, &cat) in missing.iter().enumerate() {
            let row = rows.row(r);
            let mut best = (0, f64::INFINITY);
            for c in 0..d {
                let dist = squared_distance(row, cl.model.centers.row(c));
                if dist < best.1 {
                    best = (c, dist);
                }
            }
            raw[cat] = best.0;
        }
    }
    let mut relabel = alloc::vec![usize::MAX; d];
    let mut next = 0;
    for &c in &raw {
        if relabel[c] == usize::MAX {
            relabel[c] = next;
            next += 1;
        }
    }
    for r in relabel.iter_mut().filter(|r| **r == usize::MAX) {
        *r = next;
        next += 1;
    }
    Ok(raw.into_iter().map(|c| relabel[c]).collect())
}

/// Row `i` holds the similarities of `values[i]` to each prototype.
pub fn reduce_by_prototypes<S: AsRef<str>>(
    values: &[S],
    protos: &PrototypeSet,
    m: &SimilarityMeasure,
) -> Result<FeatureMatrix> {
    let out = pairwise_similarity(values, &protos.prototypes, m)?;
    let labels = protos.prototypes.iter().map(|p| alloc::format!("sim:{p}")).collect();
    out.with_labels(labels)
}

/// One-hot encoding of k-means merged categories: a minimal deduplication.
pub fn dedup_merge_encoder(
    domain: &CategoryDomain,
    m: &SimilarityMeasure,
    d: usize,
    seed: u64,
) -> Result<FittedEncoder> {
    let assignment = cluster_domain(domain, m, d, DEFAULT_SUBSAMPLE, seed)?;
    FittedEncoder::from_parts(
        EncoderSpec::ClusterOneHot {
            clusters: d,
            measure: *m,
        },
        domain.clone(),
        EncoderState::ClusterOneHot {
            assignment,
            n_clusters: d,
        },
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn identity_projection_is_a_no_op() {
        let x = FeatureMatrix::from_rows(&[vec![1.0, -2.0, 0.5], vec![0.0, 3.0, 4.0]]).unwrap();
        let y = ProjectionMatrix::identity(3).project(&x).unwrap();
        assert_eq!(y.as_slice(), x.as_slice());
    }

    #[test]
    fn projection_of_zeros_is_zero() {
        let x = FeatureMatrix::zeros(4, 10);
        let y = random_projection(&x, 3, 1).unwrap();
        assert_eq!(y.shape(), (4, 3));
        assert!(y.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn projection_is_seed_deterministic() {
        let a = ProjectionMatrix::gaussian(20, 5, 9).unwrap();
        let b = ProjectionMatrix::gaussian(20, 5, 9).unwrap();
        let c = ProjectionMatrix::gaussian(20, 5, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(ProjectionMatrix::gaussian(20, 0, 1).is_err());
    }

    #[test]
    fn projection_entry_variance_is_one_over_d() {
        let d = 200;
        let r = ProjectionMatrix::gaussian(500, d, 3).unwrap();
        let n = r.entries().len() as f64;
        let mean = r.entries().iter().sum::<f64>() / n;
        let var = r.entries().iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 1e-3);
        assert!((var * d as f64 - 1.0).abs() < 0.02, "variance·d = {}", var * d as f64);
    }

    fn freq_domain(items: &[(&str, usize)]) -> CategoryDomain {
        CategoryDomain::from_parts(
            items.iter().map(|(c, _)| String::from(*c)).collect(),
            items.iter().map(|(_, f)| *f).collect(),
        )
        .unwrap()
    }

    #[test]
    fn most_frequent_examples() {
        let d = freq_domain(&[("c", 1), ("a", 5), ("b", 3)]);
        assert_eq!(most_frequent_prototypes(&d, 2).unwrap().prototypes, ["a", "b"]);
        assert_eq!(most_frequent_prototypes(&d, 3).unwrap().len(), 3);
        let tie = freq_domain(&[("b", 2), ("a", 2)]);
        assert_eq!(most_frequent_prototypes(&tie, 1).unwrap().prototypes, ["a"]);
        assert!(most_frequent_prototypes(&tie, 3).is_err());
        assert!(most_frequent_prototypes(&tie, 0).is_err());
    }

    #[test]
    fn kmeans_with_k_equal_n() {
        let x = FeatureMatrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 5.0], vec![-3.0, 2.0]]).unwrap();
        let m = kmeans(&x, 3, 4, 100).unwrap();
        assert_eq!(m.inertia, 0.0);
        let mut a = m.assignments.clone();
        a.sort_unstable();
        assert_eq!(a, [0, 1, 2]);
    }

    #[test]
    fn kmeans_single_center_is_mean() {
        let x = FeatureMatrix::from_rows(&[vec![0.0, 0.0], vec![2.0, 4.0], vec![4.0, 2.0]]).unwrap();
        let m = kmeans(&x, 1, 0, 100).unwrap();
        assert_eq!(m.centers.row(0), &[2.0, 2.0]);
        assert_eq!(m.inertia, 8.0 + 4.0 + 4.0);
    }

    #[test]
    fn kmeans_rejects_too_many_clusters() {
        let x = FeatureMatrix::zeros(2, 2);
        assert!(matches!(kmeans(&x, 3, 0, 10), Err(Error::TooMany { .. })));
        assert!(kmeans(&x, 1, 0, 0).is_err());
    }

    #[test]
    fn kmeans_handles_duplicate_points() {
        let x = FeatureMatrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0], vec![5.0]]).unwrap();
        let m = kmeans(&x, 3, 0, 20).unwrap();
        assert_eq!(m.inertia, 0.0);
        assert_eq!(m.centers.rows(), 3);
    }

    #[test]
    fn kmeans_prototypes_full_domain() {
        let d = CategoryDomain::from_column(&["aa", "ab", "zz", "zy", "aa"]).unwrap();
        let m = SimilarityMeasure::NGram { n: 2 };
        let p = kmeans_prototypes(&d, &m, 4, DEFAULT_SUBSAMPLE, 0).unwrap();
        assert_eq!(p.prototypes, ["aa", "ab", "zz", "zy"]);
        assert!(kmeans_prototypes(&d, &m, 5, DEFAULT_SUBSAMPLE, 0).is_err());
    }

    #[test]
    fn kmeans_prototypes_with_subsample() {
        let col: Vec<String> = (0..200).map(|i| alloc::format!("cat{}", i % 40)).collect();
        let d = CategoryDomain::from_column(&col).unwrap();
        let m = SimilarityMeasure::NGram { n: 3 };
        let p = kmeans_prototypes(&d, &m, 30, 50, 3).unwrap();
        assert_eq!(p.len(), 30);
        let mut uniq = p.prototypes.clone();
        uniq.dedup();
        assert_eq!(uniq.len(), 30);
        assert!(p.prototypes.iter().all(|c| d.index_of(c).is_some()));
        assert_eq!(p, kmeans_prototypes(&d, &m, 30, 50, 3).unwrap());
    }

    #[test]
    fn reduce_by_prototypes_example() {
        let protos = PrototypeSet {
            prototypes: vec!["Paris".into(), "Parisian".into()],
            method: PrototypeMethod::MostFrequent,
        };
        let out = reduce_by_prototypes(&["Pariss", "Paris"], &protos, &SimilarityMeasure::NGram { n: 3 }).unwrap();
        assert_eq!(out.row(0), &[0.75, 3.0 / 7.0]);
        assert_eq!(out.row(1)[0], 1.0);
        assert_eq!(out.labels()[0], "sim:Paris");
    }

    #[test]
    fn dedup_merge_with_d_equal_k_is_one_hot() {
        let col = ["north", "south", "east", "west"];
        let d = CategoryDomain::from_column(&col).unwrap();
        let enc = dedup_merge_encoder(&d, &SimilarityMeasure::NGram { n: 3 }, 4, 11).unwrap();
        let oh = FittedEncoder::fit(EncoderSpec::OneHot, &col, None).unwrap();
        assert_eq!(enc.transform(&col).as_slice(), oh.transform(&col).as_slice());
        assert_eq!(enc.output_dim(), 4);
    }
}

//! Categorical encoders under a uniform fit/transform contract.
//!
//! Every fitted encoder is immutable and can transform any string, including
//! categories never seen during fitting:
//!
//! | kind              | output dim              | unseen category                     |
//! |-------------------|-------------------------|-------------------------------------|
//! | `one_hot`         | k                       | zero vector                         |
//! | `similarity`      | k (or #prototypes)      | similarities to the training domain |
//! | `hashing`         | dim                     | MD5 bucket (no state)               |
//! | `target`          | 1, or #classes          | prior                               |
//! | `mdv`             | 1, or #classes          | zero vector                         |
//! | `bag_of_ngrams`   | vocabulary size         | counts of known n-grams             |
//! | `cluster_one_hot` | c                       | cluster of most similar category    |

mod domain;
mod target_stats;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use md5::{Digest, Md5};

pub use domain::CategoryDomain;
pub use target_stats::{shrinkage_weight, TargetStats, DEFAULT_SHRINKAGE};

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::reduction::{self, ProjectionMatrix, PrototypeSet};
use crate::similarity::{ReferenceSet, SimilarityMeasure};
use crate::target::{Target, TaskKind};

pub const DEFAULT_HASH_DIM: usize = 256;

/// What to fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EncoderSpec {
    OneHot,
    Similarity(SimilarityMeasure),
    Hashing { dim: usize },
    Target { shrinkage: f64 },
    Mdv,
    BagOfNgrams { n: usize },
    ClusterOneHot { clusters: usize, measure: SimilarityMeasure },
}

impl EncoderSpec {
    pub fn requires_target(&self) -> bool {
        matches!(self, EncoderSpec::Target { .. } | EncoderSpec::Mdv)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            EncoderSpec::OneHot => "one_hot",
            EncoderSpec::Similarity(_) => "similarity",
            EncoderSpec::Hashing { .. } => "hashing",
            EncoderSpec::Target { .. } => "target",
            EncoderSpec::Mdv => "mdv",
            EncoderSpec::BagOfNgrams { .. } => "bag_of_ngrams",
            EncoderSpec::ClusterOneHot { .. } => "cluster_one_hot",
        }
    }
}

impl fmt::Display for EncoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncoderSpec::OneHot | EncoderSpec::Mdv => f.write_str(self.kind_name()),
            EncoderSpec::Similarity(m) => write!(f, "similarity:{m}"),
            EncoderSpec::Hashing { dim } => write!(f, "hashing:{dim}"),
            EncoderSpec::Target { shrinkage } => write!(f, "target:{shrinkage}"),
            EncoderSpec::BagOfNgrams { n } => write!(f, "bag_of_ngrams:{n}"),
            EncoderSpec::ClusterOneHot { clusters, measure } => {
                write!(f, "cluster_one_hot:{clusters}:{measure}")
            }
        }
    }
}

impl FromStr for EncoderSpec {
    type Err = Error;

    /// `one_hot`, `similarity[:<measure>]`, `hashing[:<dim>]`,
    /// `target[:<m>]`, `mdv`, `bag_of_ngrams[:<n>]`,
    /// `cluster_one_hot:<c>[:<measure>]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(alloc::format!("unknown encoder `{s}`"));
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let spec = match (kind, arg) {
            ("one_hot" | "onehot", None) => EncoderSpec::OneHot,
            ("mdv", None) => EncoderSpec::Mdv,
            ("similarity", None) => EncoderSpec::Similarity(SimilarityMeasure::default()),
            ("similarity", Some(m)) => EncoderSpec::Similarity(m.parse()?),
            ("hashing", None) => EncoderSpec::Hashing {
                dim: DEFAULT_HASH_DIM,
            },
            ("hashing", Some(d)) => EncoderSpec::Hashing {
                dim: d.parse().map_err(|_| bad())?,
            },
            ("target", None) => EncoderSpec::Target {
                shrinkage: DEFAULT_SHRINKAGE,
            },
            ("target", Some(m)) => EncoderSpec::Target {
                shrinkage: m.parse().map_err(|_| bad())?,
            },
            ("bag_of_ngrams", None) => EncoderSpec::BagOfNgrams { n: 3 },
            ("bag_of_ngrams", Some(n)) => EncoderSpec::BagOfNgrams {
                n: n.parse().map_err(|_| bad())?,
            },
            ("cluster_one_hot", Some(rest)) => {
                let (c, m) = match rest.split_once(':') {
                    Some((c, m)) => (c, m.parse()?),
                    None => (rest, SimilarityMeasure::default()),
                };
                EncoderSpec::ClusterOneHot {
                    clusters: c.parse().map_err(|_| bad())?,
                    measure: m,
                }
            }
            _ => return Err(bad()),
        };
        validate_spec(&spec)?;
        Ok(spec)
    }
}

fn validate_spec(spec: &EncoderSpec) -> Result<()> {
    match *spec {
        EncoderSpec::Hashing { dim: 0 } => Err(Error::InvalidParameter("hashing dim must be >= 1".into())),
        EncoderSpec::BagOfNgrams { n: 0 } => Err(Error::InvalidParameter("n-gram size must be >= 1".into())),
        EncoderSpec::ClusterOneHot { clusters: 0, .. } => {
            Err(Error::InvalidParameter("cluster count must be >= 1".into()))
        }
        EncoderSpec::Target { shrinkage } if !(shrinkage > 0.0 && shrinkage.is_finite()) => {
            Err(Error::InvalidParameter("shrinkage must be > 0".into()))
        }
        EncoderSpec::Similarity(SimilarityMeasure::JaroWinkler { p }) if !(0.0..=0.25).contains(&p) => Err(
            Error::InvalidParameter("Jaro-Winkler scaling factor must lie in [0, 0.25]".into()),
        ),
        _ => Ok(()),
    }
}

/// Per-kind fitted state.
#[derive(Debug, Clone, PartialEq)]
pub enum EncoderState {
    OneHot,
    /// Reference columns are the prototypes when present, else the domain.
    Similarity { prototypes: Option<PrototypeSet> },
    Hashing,
    Target(TargetStats),
    Mdv(TargetStats),
    BagOfNgrams { vocab: Vec<String> },
    /// `assignment[i]` is the cluster of domain category `i`.
    ClusterOneHot { assignment: Vec<usize>, n_clusters: usize },
}

/// Derived lookup structures, rebuilt from the state and never serialized.
#[derive(Debug, Clone)]
enum Cache {
    None,
    References(ReferenceSet),
    Vocab(BTreeMap<String, usize>),
}

#[derive(Debug, Clone)]
pub struct FittedEncoder {
    spec: EncoderSpec,
    domain: CategoryDomain,
    state: EncoderState,
    projection: Option<ProjectionMatrix>,
    cache: Cache,
}

impl PartialEq for FittedEncoder {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.domain == other.domain
            && self.state == other.state
            && self.projection == other.projection
    }
}

impl FittedEncoder {
    /// Fits `spec` on a training column. `target` is required by `target`
    /// and `mdv` and ignored otherwise. Clustering uses seed 0; see
    /// [`FittedEncoder::fit_seeded`].
    pub fn fit<S: AsRef<str>>(spec: EncoderSpec, column: &[S], target: Option<&Target>) -> Result<Self> {
        Self::fit_seeded(spec, column, target, 0)
    }

    pub fn fit_seeded<S: AsRef<str>>(
        spec: EncoderSpec,
        column: &[S],
        target: Option<&Target>,
        seed: u64,
    ) -> Result<Self> {
        validate_spec(&spec)?;
        let domain = CategoryDomain::from_column(column)?;
        let supervised = |name| -> Result<(&Target, Vec<usize>)> {
            let t = target.ok_or(Error::MissingTarget(name))?;
            if t.len() != column.len() {
                return Err(Error::LengthMismatch {
                    expected: column.len(),
                    got: t.len(),
                });
            }
            let codes = column
                .iter()
                .map(|v| domain.index_of(v.as_ref()).unwrap())
                .collect();
            Ok((t, codes))
        };
        let state = match spec {
            EncoderSpec::OneHot => EncoderState::OneHot,
            EncoderSpec::Similarity(_) => EncoderState::Similarity { prototypes: None },
            EncoderSpec::Hashing { .. } => EncoderState::Hashing,
            EncoderSpec::Target { shrinkage } => {
                let (t, codes) = supervised("target")?;
                EncoderState::Target(TargetStats::fit(&domain, &codes, t, shrinkage)?)
            }
            EncoderSpec::Mdv => {
                let (t, codes) = supervised("mdv")?;
                if t.kind() == TaskKind::Regression {
                    return Err(Error::MdvRequiresClassification);
                }
                EncoderState::Mdv(TargetStats::fit(&domain, &codes, t, DEFAULT_SHRINKAGE)?)
            }
            EncoderSpec::BagOfNgrams { n } => EncoderState::BagOfNgrams {
                vocab: ngram_vocabulary(domain.categories(), n),
            },
            EncoderSpec::ClusterOneHot { clusters, measure } => {
                let assignment = reduction::cluster_domain(
                    &domain,
                    &measure,
                    clusters,
                    reduction::DEFAULT_SUBSAMPLE,
                    seed,
                )?;
                EncoderState::ClusterOneHot {
                    assignment,
                    n_clusters: clusters,
                }
            }
        };
        Self::from_parts(spec, domain, state, None)
    }

    /// Reassembles an encoder from its parts, checking that they agree.
    pub fn from_parts(
        spec: EncoderSpec,
        domain: CategoryDomain,
        state: EncoderState,
        projection: Option<ProjectionMatrix>,
    ) -> Result<Self> {
        validate_spec(&spec)?;
        let mismatch = || {
            Error::InvalidParameter(alloc::format!(
                "encoder state does not match spec `{spec}`"
            ))
        };
        let cache = match (&spec, &state) {
            (EncoderSpec::OneHot, EncoderState::OneHot) => Cache::None,
            (EncoderSpec::Hashing { .. }, EncoderState::Hashing) => Cache::None,
            (EncoderSpec::Similarity(m), EncoderState::Similarity { prototypes }) => {
                let refs = match prototypes {
                    Some(p) => {
                        if let Some(bad) = p.prototypes.iter().find(|c| domain.index_of(c).is_none()) {
                            return Err(Error::InvalidParameter(alloc::format!(
                                "prototype `{bad}` is not in the training domain"
                            )));
                        }
                        ReferenceSet::new(*m, &p.prototypes)
                    }
                    None => ReferenceSet::new(*m, domain.categories()),
                };
                Cache::References(refs)
            }
            (EncoderSpec::Target { shrinkage }, EncoderState::Target(stats)) => {
                if stats.shrinkage != *shrinkage || stats.conditional.len() != domain.len() {
                    return Err(mismatch());
                }
                Cache::None
            }
            (EncoderSpec::Mdv, EncoderState::Mdv(stats)) => {
                if stats.task == TaskKind::Regression || stats.class_conditional.len() != domain.len() {
                    return Err(mismatch());
                }
                Cache::None
            }
            (EncoderSpec::BagOfNgrams { n }, EncoderState::BagOfNgrams { vocab }) => {
                if vocab.iter().any(|g| g.chars().count() != *n) {
                    return Err(mismatch());
                }
                let index: BTreeMap<String, usize> =
                    vocab.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
                if index.len() != vocab.len() {
                    return Err(mismatch());
                }
                Cache::Vocab(index)
            }
            (
                EncoderSpec::ClusterOneHot { clusters, measure },
                EncoderState::ClusterOneHot {
                    assignment,
                    n_clusters,
                },
            ) => {
                if clusters != n_clusters
                    || assignment.len() != domain.len()
                    || assignment.iter().any(|&c| c >= *n_clusters)
                {
                    return Err(mismatch());
                }
                Cache::References(ReferenceSet::new(*measure, domain.categories()))
            }
            _ => return Err(mismatch()),
        };
        let mut enc = Self {
            spec,
            domain,
            state,
            projection: None,
            cache,
        };
        if let Some(p) = projection {
            enc = enc.with_projection(p)?;
        }
        Ok(enc)
    }

    /// Restricts a similarity encoder to a set of prototype columns.
    pub fn with_prototypes(self, prototypes: PrototypeSet) -> Result<Self> {
        if !matches!(self.state, EncoderState::Similarity { .. }) {
            return Err(Error::InvalidParameter(
                "prototypes only apply to similarity encoders".into(),
            ));
        }
        Self::from_parts(
            self.spec,
            self.domain,
            EncoderState::Similarity {
                prototypes: Some(prototypes),
            },
            self.projection,
        )
    }

    /// Appends a random projection of the encoded vectors.
    pub fn with_projection(mut self, projection: ProjectionMatrix) -> Result<Self> {
        if projection.input_dim() != self.base_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.base_dim(),
                got: projection.input_dim(),
            });
        }
        self.projection = Some(projection);
        Ok(self)
    }

    pub fn spec(&self) -> &EncoderSpec {
        &self.spec
    }

    pub fn domain(&self) -> &CategoryDomain {
        &self.domain
    }

    pub fn state(&self) -> &EncoderState {
        &self.state
    }

    pub fn projection(&self) -> Option<&ProjectionMatrix> {
        self.projection.as_ref()
    }

    /// Dimension before any projection.
    pub fn base_dim(&self) -> usize {
        match (&self.spec, &self.state) {
            (EncoderSpec::Hashing { dim }, _) => *dim,
            (_, EncoderState::OneHot) => self.domain.len(),
            (_, EncoderState::Similarity { prototypes }) => {
                prototypes.as_ref().map_or(self.domain.len(), |p| p.len())
            }
            (_, EncoderState::Target(stats)) => stats.output_dim(),
            (_, EncoderState::Mdv(stats)) => mdv_dim(stats),
            (_, EncoderState::BagOfNgrams { vocab }) => vocab.len(),
            (_, EncoderState::ClusterOneHot { n_clusters, .. }) => *n_clusters,
            (_, EncoderState::Hashing) => unreachable!(),
        }
    }

    pub fn output_dim(&self) -> usize {
        self.projection.as_ref().map_or(self.base_dim(), |p| p.output_dim())
    }

    /// Provenance label for every output column.
    pub fn column_labels(&self) -> Vec<String> {
        if let Some(p) = &self.projection {
            return (0..p.output_dim()).map(|i| alloc::format!("proj:{i}")).collect();
        }
        let cats = self.domain.categories();
        match &self.state {
            EncoderState::OneHot => cats.iter().map(|c| alloc::format!("onehot:{c}")).collect(),
            EncoderState::Similarity { prototypes } => prototypes
                .as_ref()
                .map_or(cats, |p| &p.prototypes[..])
                .iter()
                .map(|c| alloc::format!("sim:{c}"))
                .collect(),
            EncoderState::Hashing => (0..self.base_dim()).map(|i| alloc::format!("hash:{i}")).collect(),
            EncoderState::Target(stats) => match stats.task {
                TaskKind::MulticlassClassification => {
                    (0..stats.output_dim()).map(|c| alloc::format!("target:{c}")).collect()
                }
                _ => alloc::vec!["target".to_string()],
            },
            EncoderState::Mdv(stats) if mdv_positive_only(stats) => alloc::vec!["mdv:1".to_string()],
            EncoderState::Mdv(stats) => (0..mdv_dim(stats)).map(|c| alloc::format!("mdv:{c}")).collect(),
            EncoderState::BagOfNgrams { vocab } => vocab.iter().map(|g| alloc::format!("ngram:{g}")).collect(),
            EncoderState::ClusterOneHot { n_clusters, .. } => {
                (0..*n_clusters).map(|c| alloc::format!("cluster:{c}")).collect()
            }
        }
    }

    /// Encodes a single value before projection.
    fn encode_base(&self, v: &str, out: &mut [f64]) {
        match (&self.state, &self.cache) {
            (EncoderState::OneHot, _) => {
                if let Some(i) = self.domain.index_of(v) {
                    out[i] = 1.0;
                }
            }
            (EncoderState::Similarity { .. }, Cache::References(refs)) => refs.fill_row(v, out),
            (EncoderState::Hashing, _) => out[hash_index(v, out.len())] = 1.0,
            (EncoderState::Target(stats), _) => {
                let idx = self.domain.index_of(v);
                out.copy_from_slice(&stats.encode_target(idx, self.domain.frequency_of(v)));
            }
            (EncoderState::Mdv(stats), _) => {
                let full = stats
                    .encode_mdv(self.domain.index_of(v))
                    .expect("MDV state is always a classification state");
                if mdv_positive_only(stats) {
                    out[0] = full[1];
                } else {
                    out.copy_from_slice(&full);
                }
            }
            (EncoderState::BagOfNgrams { vocab }, Cache::Vocab(index)) => {
                let n = vocab.first().map_or(1, |g| g.chars().count());
                count_ngrams(index, n, v, out);
            }
            (EncoderState::ClusterOneHot { assignment, .. }, Cache::References(refs)) => {
                let i = self.domain.index_of(v).unwrap_or_else(|| refs.nearest(v));
                out[assignment[i]] = 1.0;
            }
            _ => unreachable!("cache is built from the state"),
        }
    }

    /// Encodes one value.
    pub fn encode(&self, v: &str) -> Vec<f64> {
        self.transform(&[v]).into_vec()
    }

    /// Encodes every value; row `i` of the result is the encoding of `values[i]`.
    /// Repeated values are encoded once.
    pub fn transform<S: AsRef<str>>(&self, values: &[S]) -> FeatureMatrix {
        let base = self.base_dim();
        let mut unique: BTreeMap<&str, usize> = BTreeMap::new();
        let mut order = Vec::with_capacity(values.len());
        let mut distinct = Vec::new();
        for v in values {
            let v = v.as_ref();
            let next = unique.len();
            let slot = *unique.entry(v).or_insert_with(|| {
                distinct.push(v);
                next
            });
            order.push(slot);
        }
        let mut encoded = FeatureMatrix::zeros(distinct.len(), base);
        for (i, v) in distinct.iter().enumerate() {
            self.encode_base(v, encoded.row_mut(i));
        }
        if let Some(p) = &self.projection {
            encoded = p.project(&encoded).expect("projection input dim checked at construction");
        }
        let mut out = encoded.select_rows(&order);
        out.labels_mut().clone_from_slice(&self.column_labels());
        out
    }
}

/// Binary MDV keeps only the positive-class component.
fn mdv_positive_only(stats: &TargetStats) -> bool {
    stats.task == TaskKind::BinaryClassification && stats.class_conditional.first().map_or(0, Vec::len) == 2
}

fn mdv_dim(stats: &TargetStats) -> usize {
    if mdv_positive_only(stats) {
        1
    } else {
        stats.class_conditional.first().map_or(0, Vec::len)
    }
}

/// Distinct n-grams of the training categories in first-appearance order.
pub fn ngram_vocabulary<S: AsRef<str>>(column: &[S], n: usize) -> Vec<String> {
    let mut seen = alloc::collections::BTreeSet::new();
    let mut vocab = Vec::new();
    for v in column {
        let chars: Vec<char> = v.as_ref().chars().collect();
        for w in chars.windows(n) {
            let g: String = w.iter().collect();
            if seen.insert(g.clone()) {
                vocab.push(g);
            }
        }
    }
    vocab
}

fn count_ngrams(index: &BTreeMap<String, usize>, n: usize, v: &str, out: &mut [f64]) {
    let chars: Vec<char> = v.chars().collect();
    let mut buf = String::new();
    for w in chars.windows(n) {
        buf.clear();
        buf.extend(w.iter());
        if let Some(&j) = index.get(buf.as_str()) {
            out[j] += 1.0;
        }
    }
}

/// MD5 digest of `v`, read as a big-endian 128-bit integer, modulo `dim`.
pub fn hash_index(v: &str, dim: usize) -> usize {
    let digest: [u8; 16] = Md5::digest(v.as_bytes()).into();
    (u128::from_be_bytes(digest) % dim as u128) as usize
}

/// Unit vector at `v`'s index, or zeros for an unseen category.
pub fn encode_one_hot(domain: &CategoryDomain, v: &str) -> Vec<f64> {
    let mut out = alloc::vec![0.0; domain.len()];
    if let Some(i) = domain.index_of(v) {
        out[i] = 1.0;
    }
    out
}

/// `[sim(v, d_1), …, sim(v, d_k)]`.
pub fn encode_similarity(domain: &CategoryDomain, m: &SimilarityMeasure, v: &str) -> Vec<f64> {
    domain.categories().iter().map(|d| m.similarity(v, d)).collect()
}

pub fn encode_hashing(v: &str, dim: usize) -> Result<Vec<f64>> {
    if dim == 0 {
        return Err(Error::InvalidParameter("hashing dim must be >= 1".into()));
    }
    let mut out = alloc::vec![0.0; dim];
    out[hash_index(v, dim)] = 1.0;
    Ok(out)
}

/// Occurrence counts (with multiplicity) of each vocabulary n-gram in `v`.
pub fn encode_bag_of_ngrams(vocab: &[String], n: usize, v: &str) -> Vec<f64> {
    let index: BTreeMap<String, usize> = vocab.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let mut out = alloc::vec![0.0; vocab.len()];
    count_ngrams(&index, n, v, &mut out);
    out
}

/// Indicator of `v`'s cluster. Unseen values take the cluster of their most
/// similar training category (lowest index on ties).
pub fn encode_cluster_one_hot(
    domain: &CategoryDomain,
    assignment: &[usize],
    n_clusters: usize,
    m: &SimilarityMeasure,
    v: &str,
) -> Vec<f64> {
    let i = domain
        .index_of(v)
        .unwrap_or_else(|| ReferenceSet::new(*m, domain.categories()).nearest(v));
    let mut out = alloc::vec![0.0; n_clusters];
    out[assignment[i]] = 1.0;
    out
}

//! String similarity measures and the matrices built from them.
//!
//! Lengths, n-grams and edit operations all count Unicode scalar values
//! (`char`), never bytes. Measures are case-sensitive; lowercasing happens
//! during ingestion.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::matrix::{dot, FeatureMatrix};
use crate::rng;

/// Default Jaro-Winkler prefix scaling factor.
pub const DEFAULT_JW_SCALING: f64 = 0.1;
/// Longest common prefix credited by Jaro-Winkler.
pub const JW_PREFIX_CAP: usize = 4;

/// The set of contiguous character n-grams of a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramSet {
    pub n: usize,
    pub grams: BTreeSet<String>,
}

impl NGramSet {
    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }

    pub fn contains(&self, gram: &str) -> bool {
        self.grams.contains(gram)
    }
}

/// All length-`n` windows of `s`, deduplicated. Strings shorter than `n`
/// give the empty set.
pub fn ngrams(s: &str, n: usize) -> Result<NGramSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("n-gram size must be >= 1".into()));
    }
    let chars: Vec<char> = s.chars().collect();
    let grams = chars.windows(n).map(|w| w.iter().collect()).collect();
    Ok(NGramSet { n, grams })
}

/// Costs of the three edit operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EditWeights {
    pub insert: f64,
    pub delete: f64,
    pub replace: f64,
}

impl Default for EditWeights {
    fn default() -> Self {
        Self {
            insert: 1.0,
            delete: 1.0,
            replace: 2.0,
        }
    }
}

impl EditWeights {
    pub fn new(insert: f64, delete: f64, replace: f64) -> Result<Self> {
        if [insert, delete, replace].iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidParameter(
                "edit costs must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            insert,
            delete,
            replace,
        })
    }
}

/// Minimal weighted cost of transforming `s1` into `s2`.
pub fn levenshtein_distance(s1: &str, s2: &str, weights: &EditWeights) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    levenshtein_chars(&a, &b, weights)
}

fn levenshtein_chars(a: &[char], b: &[char], w: &EditWeights) -> f64 {
    // Single-row DP; `row[j]` is the cost of turning a[..i] into b[..j].
    let mut row: Vec<f64> = (0..=b.len()).map(|j| j as f64 * w.insert).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = (i + 1) as f64 * w.delete;
        for (j, &cb) in b.iter().enumerate() {
            let sub = if ca == cb { diag } else { diag + w.replace };
            let del = row[j + 1] + w.delete;
            let ins = row[j] + w.insert;
            diag = row[j + 1];
            row[j + 1] = sub.min(del).min(ins);
        }
    }
    row[b.len()]
}

/// `1 - d_lev / (|s1| + |s2|)` with insert/delete cost 1 and replace cost 2.
/// Two empty strings are identical and score 1.
pub fn sim_levenshtein_ratio(s1: &str, s2: &str) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    lev_ratio_chars(&a, &b)
}

fn lev_ratio_chars(a: &[char], b: &[char]) -> f64 {
    let total = a.len() + b.len();
    if total == 0 {
        return 1.0;
    }
    1.0 - levenshtein_chars(a, b, &EditWeights::default()) / total as f64
}

/// Jaro similarity. Characters match when equal and no further apart than
/// `max(|s1|, |s2|) / 2 - 1` positions. Returns 0 when nothing matches and 1
/// for two empty strings.
pub fn jaro(s1: &str, s2: &str) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    jaro_chars(&a, &b)
}

fn jaro_chars(a: &[char], b: &[char]) -> f64 {
    // Greedy matching is order dependent; evaluating in a canonical argument
    // order makes the measure exactly symmetric.
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_matched = alloc::vec![false; a.len()];
    let mut b_matched = alloc::vec![false; b.len()];
    let mut matches = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_matched[j] && b[j] == ca {
                a_matched[i] = true;
                b_matched[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }
    let mut half_transpositions = 0usize;
    let mut k = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        if !a_matched[i] {
            continue;
        }
        while !b_matched[k] {
            k += 1;
        }
        if ca != b[k] {
            half_transpositions += 1;
        }
        k += 1;
    }
    let m = matches as f64;
    let t = (half_transpositions / 2) as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Jaro-Winkler similarity: the Jaro score boosted by the common prefix
/// (capped at four characters) times the scaling factor `p`.
pub fn sim_jaro_winkler(s1: &str, s2: &str, p: f64) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    jaro_winkler_chars(&a, &b, p)
}

fn jaro_winkler_chars(a: &[char], b: &[char], p: f64) -> f64 {
    let j = jaro_chars(a, b);
    let prefix = a
        .iter()
        .zip(b)
        .take(JW_PREFIX_CAP)
        .take_while(|(x, y)| x == y)
        .count();
    j + prefix as f64 * p * (1.0 - j)
}

/// Intersection over union of the n-gram sets. When neither string has an
/// n-gram (both shorter than `n`) the result is the exact-match indicator.
pub fn sim_ngram(s1: &str, s2: &str, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n-gram size must be >= 1".into()));
    }
    let a = Prepared::new(s1, Some(n));
    let b = Prepared::new(s2, Some(n));
    Ok(ngram_prepared(&a, &b))
}

/// A string pre-split into characters, plus its sorted n-gram windows when an
/// n-gram measure is in use. Lets matrix builders avoid re-tokenizing.
#[derive(Debug, Clone)]
struct Prepared {
    chars: Vec<char>,
    n: usize,
    // Start offsets of the distinct n-grams, sorted by gram content.
    grams: Vec<usize>,
}

impl Prepared {
    fn new(s: &str, n: Option<usize>) -> Self {
        let chars: Vec<char> = s.chars().collect();
        let (n, grams) = match n {
            Some(n) if chars.len() >= n => {
                let mut starts: Vec<usize> = (0..=chars.len() - n).collect();
                starts.sort_by(|&x, &y| chars[x..x + n].cmp(&chars[y..y + n]).then(x.cmp(&y)));
                starts.dedup_by(|x, y| chars[*x..*x + n] == chars[*y..*y + n]);
                (n, starts)
            }
            Some(n) => (n, Vec::new()),
            None => (0, Vec::new()),
        };
        Self { chars, n, grams }
    }

    #[inline]
    fn gram(&self, k: usize) -> &[char] {
        let s = self.grams[k];
        &self.chars[s..s + self.n]
    }
}

fn ngram_prepared(a: &Prepared, b: &Prepared) -> f64 {
    if a.grams.is_empty() && b.grams.is_empty() {
        return if a.chars == b.chars { 1.0 } else { 0.0 };
    }
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.grams.len() && j < b.grams.len() {
        match a.gram(i).cmp(b.gram(j)) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.grams.len() + b.grams.len() - common;
    common as f64 / union as f64
}

/// A string similarity with values in `[0, 1]`, symmetric, and equal to 1 on
/// identical strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimilarityMeasure {
    LevenshteinRatio,
    JaroWinkler { p: f64 },
    NGram { n: usize },
    /// 0/1 indicator of string equality; similarity encoding with it is one-hot.
    ExactMatch,
}

impl SimilarityMeasure {
    pub fn jaro_winkler(p: f64) -> Result<Self> {
        if !(0.0..=0.25).contains(&p) {
            return Err(Error::InvalidParameter(alloc::format!(
                "Jaro-Winkler scaling factor must lie in [0, 0.25], got {p}"
            )));
        }
        Ok(Self::JaroWinkler { p })
    }

    pub fn ngram(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n-gram size must be >= 1".into()));
        }
        Ok(Self::NGram { n })
    }

    pub fn similarity(&self, s1: &str, s2: &str) -> f64 {
        let a = self.prepare(s1);
        let b = self.prepare(s2);
        self.prepared(&a, &b)
    }

    fn prepare(&self, s: &str) -> Prepared {
        match *self {
            SimilarityMeasure::NGram { n } => Prepared::new(s, Some(n)),
            _ => Prepared::new(s, None),
        }
    }

    fn prepared(&self, a: &Prepared, b: &Prepared) -> f64 {
        match *self {
            SimilarityMeasure::LevenshteinRatio => lev_ratio_chars(&a.chars, &b.chars),
            SimilarityMeasure::JaroWinkler { p } => jaro_winkler_chars(&a.chars, &b.chars, p),
            SimilarityMeasure::NGram { .. } => ngram_prepared(a, b),
            SimilarityMeasure::ExactMatch => (a.chars == b.chars) as u8 as f64,
        }
    }
}

impl Default for SimilarityMeasure {
    fn default() -> Self {
        SimilarityMeasure::NGram { n: 3 }
    }
}

impl fmt::Display for SimilarityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SimilarityMeasure::LevenshteinRatio => f.write_str("lev_ratio"),
            SimilarityMeasure::JaroWinkler { p } if p == DEFAULT_JW_SCALING => {
                f.write_str("jaro_winkler")
            }
            SimilarityMeasure::JaroWinkler { p } => write!(f, "jaro_winkler:{p}"),
            SimilarityMeasure::NGram { n } => write!(f, "ngram{n}"),
            SimilarityMeasure::ExactMatch => f.write_str("exact_match"),
        }
    }
}

impl FromStr for SimilarityMeasure {
    type Err = Error;

    /// Accepts `lev_ratio`, `jaro_winkler[:p]`, `ngram<n>` / `ngram:<n>` and
    /// `exact_match`, plus a few long-form aliases.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(alloc::format!("unknown similarity measure `{s}`"));
        match s {
            "lev_ratio" | "levenshtein_ratio" | "levenshtein" => {
                return Ok(SimilarityMeasure::LevenshteinRatio)
            }
            "jaro_winkler" | "jaro-winkler" => {
                return Ok(SimilarityMeasure::JaroWinkler {
                    p: DEFAULT_JW_SCALING,
                })
            }
            "exact_match" | "exact" => return Ok(SimilarityMeasure::ExactMatch),
            _ => {}
        }
        if let Some(p) = s.strip_prefix("jaro_winkler:") {
            return Self::jaro_winkler(p.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = s.strip_prefix("ngram") {
            let rest = rest.strip_prefix(':').unwrap_or(rest);
            return Self::ngram(rest.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

/// Matrix of `m(rows[i], cols[j])`.
pub fn pairwise_similarity<R: AsRef<str>, C: AsRef<str>>(
    rows: &[R],
    cols: &[C],
    m: &SimilarityMeasure,
) -> Result<FeatureMatrix> {
    if cols.is_empty() {
        return Err(Error::EmptyInput("similarity columns"));
    }
    let prepared_cols: Vec<Prepared> = cols.iter().map(|c| m.prepare(c.as_ref())).collect();
    let mut out = FeatureMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        let pr = m.prepare(r.as_ref());
        for (dst, pc) in out.row_mut(i).iter_mut().zip(&prepared_cols) {
            *dst = m.prepared(&pr, pc);
        }
    }
    Ok(out)
}

/// Similarity rows of `values` against a fixed reference list, preparing the
/// references once. Used by encoders that transform many batches.
#[derive(Debug, Clone)]
pub(crate) struct ReferenceSet {
    measure: SimilarityMeasure,
    refs: Vec<Prepared>,
}

impl ReferenceSet {
    pub(crate) fn new<S: AsRef<str>>(measure: SimilarityMeasure, refs: &[S]) -> Self {
        let refs = refs.iter().map(|r| measure.prepare(r.as_ref())).collect();
        Self { measure, refs }
    }

    pub(crate) fn len(&self) -> usize {
        self.refs.len()
    }

    pub(crate) fn fill_row(&self, value: &str, out: &mut [f64]) {
        let pv = self.measure.prepare(value);
        for (dst, pr) in out.iter_mut().zip(&self.refs) {
            *dst = self.measure.prepared(&pv, pr);
        }
    }

    /// Index of the most similar reference; ties go to the lowest index.
    pub(crate) fn nearest(&self, value: &str) -> usize {
        let pv = self.measure.prepare(value);
        let mut best = (0, f64::NEG_INFINITY);
        for (k, pr) in self.refs.iter().enumerate() {
            let s = self.measure.prepared(&pv, pr);
            if s > best.1 {
                best = (k, s);
            }
        }
        best.0
    }
}

/// `Σ_l m(a, d_l) · m(b, d_l)` over the domain: the inner product of the two
/// similarity-encoded vectors.
pub fn implicit_kernel<S: AsRef<str>>(
    a: &str,
    b: &str,
    domain: &[S],
    m: &SimilarityMeasure,
) -> Result<f64> {
    if domain.is_empty() {
        return Err(Error::EmptyInput("kernel domain"));
    }
    let refs = ReferenceSet::new(*m, domain);
    let mut ra = alloc::vec![0.0; refs.len()];
    let mut rb = alloc::vec![0.0; refs.len()];
    refs.fill_row(a, &mut ra);
    refs.fill_row(b, &mut rb);
    Ok(dot(&ra, &rb))
}

/// Histogram of similarities between randomly drawn pairs of distinct categories.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityHistogram {
    /// `bins + 1` edges spanning `[0, 1]`; the last bin is closed on the right.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub median: f64,
}

/// Samples `n_pairs` unordered pairs of distinct categories uniformly, with
/// replacement, and bins their similarities.
pub fn similarity_histogram<S: AsRef<str>>(
    categories: &[S],
    m: &SimilarityMeasure,
    n_pairs: usize,
    bins: usize,
    seed: u64,
) -> Result<SimilarityHistogram> {
    if n_pairs == 0 || bins == 0 {
        return Err(Error::InvalidParameter(
            "histogram needs n_pairs >= 1 and bins >= 1".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    let distinct: Vec<&str> = categories
        .iter()
        .map(|c| c.as_ref())
        .filter(|c| seen.insert(*c))
        .collect();
    if distinct.len() < 2 {
        return Err(Error::DegenerateVocabulary(distinct.len()));
    }
    let prepared: Vec<Prepared> = distinct.iter().map(|c| m.prepare(c)).collect();
    let mut rng = rng::seeded(seed);
    let k = distinct.len();
    let mut values = Vec::with_capacity(n_pairs);
    for _ in 0..n_pairs {
        let i = rng.random_range(0..k);
        let mut j = rng.random_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        values.push(m.prepared(&prepared[i], &prepared[j]));
    }
    let mut counts = alloc::vec![0usize; bins];
    for &v in &values {
        let b = ((v * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let edges = (0..=bins).map(|b| b as f64 / bins as f64).collect();
    Ok(SimilarityHistogram {
        edges,
        counts,
        median: median(&mut values),
    })
}

/// Median of a non-empty sample (mean of the two central values for even sizes).
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| String::from(*s)).collect()
    }

    #[test]
    fn ngram_examples() {
        assert_eq!(ngrams("Paris", 3).unwrap().grams, set(&["Par", "ari", "ris"]));
        assert!(ngrams("", 3).unwrap().is_empty());
        assert_eq!(ngrams("aaaa", 2).unwrap().grams, set(&["aa"]));
        assert!(ngrams("abc", 0).is_err());
    }

    #[test]
    fn ngrams_count_chars_not_bytes() {
        let g = ngrams("çaé", 2).unwrap();
        assert_eq!(g.grams, set(&["ça", "aé"]));
        assert!(g.grams.iter().all(|s| s.chars().count() == 2));
    }

    #[test]
    fn levenshtein_examples() {
        let w = EditWeights::default();
        assert_eq!(levenshtein_distance("abc", "abc", &w), 0.0);
        assert_eq!(levenshtein_distance("kitten", "sitting", &w), 5.0);
        assert_eq!(levenshtein_distance("", "ab", &w), 2.0);
        let unit = EditWeights::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(levenshtein_distance("kitten", "sitting", &unit), 3.0);
        assert!(EditWeights::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn levenshtein_ratio_examples() {
        assert_eq!(sim_levenshtein_ratio("abc", "abc"), 1.0);
        assert_eq!(sim_levenshtein_ratio("kitten", "sitting"), 1.0 - 5.0 / 13.0);
        assert_eq!(sim_levenshtein_ratio("a", "b"), 0.0);
        assert_eq!(sim_levenshtein_ratio("", ""), 1.0);
    }

    #[test]
    fn jaro_examples() {
        assert_eq!(jaro("abc", "abc"), 1.0);
        assert!((jaro("MARTHA", "MARHTA") - 17.0 / 18.0).abs() < 1e-15);
        assert_eq!(jaro("abc", "xyz"), 0.0);
        assert_eq!(jaro("", ""), 1.0);
        assert_eq!(jaro("", "a"), 0.0);
    }

    #[test]
    fn jaro_winkler_examples() {
        assert_eq!(sim_jaro_winkler("abc", "abc", 0.1), 1.0);
        let j = 17.0 / 18.0;
        let expected = j + 3.0 * 0.1 * (1.0 - j);
        assert!((sim_jaro_winkler("MARTHA", "MARHTA", 0.1) - expected).abs() < 1e-12);
        assert!((sim_jaro_winkler("MARTHA", "MARHTA", 0.1) - 0.9611).abs() < 5e-5);
        assert_eq!(sim_jaro_winkler("abc", "xyz", 0.1), 0.0);
    }

    #[test]
    fn jaro_winkler_prefix_is_capped() {
        // Common prefix of 6, credited as 4.
        let j = jaro("abcdefx", "abcdefy");
        let expected = j + 4.0 * 0.25 * (1.0 - j);
        assert_eq!(sim_jaro_winkler("abcdefx", "abcdefy", 0.25), expected);
        assert!(expected <= 1.0);
    }

    #[test]
    fn ngram_similarity_examples() {
        assert_eq!(sim_ngram("Paris", "Parisian", 3).unwrap(), 0.5);
        assert_eq!(sim_ngram("abc", "abc", 3).unwrap(), 1.0);
        assert_eq!(sim_ngram("ab", "ab", 3).unwrap(), 1.0);
        assert_eq!(sim_ngram("ab", "ac", 3).unwrap(), 0.0);
        assert_eq!(sim_ngram("ab", "abcd", 3).unwrap(), 0.0);
        assert_eq!(sim_ngram("Pariss", "Paris", 3).unwrap(), 0.75);
        assert_eq!(sim_ngram("Pariss", "Parisian", 3).unwrap(), 3.0 / 7.0);
    }

    #[test]
    fn measures_parse_and_display() {
        for s in ["lev_ratio", "jaro_winkler", "jaro_winkler:0.2", "ngram3", "exact_match"] {
            let m: SimilarityMeasure = s.parse().unwrap();
            assert_eq!(alloc::format!("{m}"), s);
        }
        assert_eq!("ngram:2".parse::<SimilarityMeasure>().unwrap(), SimilarityMeasure::NGram { n: 2 });
        assert!("jaro_winkler:0.5".parse::<SimilarityMeasure>().is_err());
        assert!("ngram0".parse::<SimilarityMeasure>().is_err());
        assert!("cosine".parse::<SimilarityMeasure>().is_err());
    }

    #[test]
    fn pairwise_examples() {
        let m = pairwise_similarity(&["a"], &["a", "b"], &SimilarityMeasure::ExactMatch).unwrap();
        assert_eq!(m.as_slice(), &[1.0, 0.0]);
        let m = pairwise_similarity(&["Paris"], &["Paris", "Parisian"], &SimilarityMeasure::NGram { n: 3 })
            .unwrap();
        assert_eq!(m.as_slice(), &[1.0, 0.5]);
        let m = pairwise_similarity(&["x"], &["x"], &SimilarityMeasure::LevenshteinRatio).unwrap();
        assert_eq!(m.as_slice(), &[1.0]);
        let empty: [&str; 0] = [];
        assert!(pairwise_similarity(&["x"], &empty, &SimilarityMeasure::ExactMatch).is_err());
    }

    #[test]
    fn kernel_examples() {
        let ng = SimilarityMeasure::NGram { n: 3 };
        let k = implicit_kernel("Paris", "Parisian", &["Paris", "Parisian"], &ng).unwrap();
        assert_eq!(k, 1.0);
        let k = implicit_kernel("a", "b", &["a", "b"], &SimilarityMeasure::ExactMatch).unwrap();
        assert_eq!(k, 0.0);
        let row = pairwise_similarity(&["Paris"], &["Paris", "Parisian", "Lyon"], &ng).unwrap();
        let k = implicit_kernel("Paris", "Paris", &["Paris", "Parisian", "Lyon"], &ng).unwrap();
        assert_eq!(k, dot(row.row(0), row.row(0)));
    }

    #[test]
    fn histogram_two_distinct_categories() {
        let h = similarity_histogram(&["a", "b"], &SimilarityMeasure::ExactMatch, 100, 10, 7).unwrap();
        assert_eq!(h.counts[0], 100);
        assert_eq!(h.counts.iter().sum::<usize>(), 100);
        assert_eq!(h.median, 0.0);
        assert_eq!(h.edges.len(), 11);
    }

    #[test]
    fn histogram_rejects_degenerate_vocabulary() {
        let err = similarity_histogram(&["a", "a"], &SimilarityMeasure::ExactMatch, 10, 10, 0);
        assert_eq!(err, Err(Error::DegenerateVocabulary(1)));
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}

//! Synthetic dirty-category corpora with a known entity behind every string.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use super::table::Table;
use crate::error::{Error, Result};
use crate::rng::{self, Rng};
use crate::target::{Target, TaskKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CorruptionKind {
    Typo,
    Abbreviation,
    ExtraneousToken,
    SpecialCharacters,
    ConcatenatedHierarchy,
}

impl CorruptionKind {
    pub const ALL: [CorruptionKind; 5] = [
        CorruptionKind::Typo,
        CorruptionKind::Abbreviation,
        CorruptionKind::ExtraneousToken,
        CorruptionKind::SpecialCharacters,
        CorruptionKind::ConcatenatedHierarchy,
    ];
}

/// Relative frequencies of the corruption kinds, in `CorruptionKind::ALL` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionMix {
    weights: [f64; 5],
}

impl CorruptionMix {
    pub fn new(weights: [f64; 5]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter("corruption mix must be non-negative and sum to 1".into()));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64; 5] {
        &self.weights
    }
}

impl Default for CorruptionMix {
    fn default() -> Self {
        Self { weights: [0.2; 5] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirtyCorpusSpec {
    pub n_entities: usize,
    pub samples: usize,
    pub mix: CorruptionMix,
    /// Chance that a row is corrupted at all; each applied corruption is
    /// followed by another with the same chance (at most three).
    pub corruption_probability: f64,
    pub seed: u64,
    pub task: TaskKind,
    /// Standard deviation of the Gaussian noise added to regression targets.
    pub noise: f64,
    pub n_classes: usize,
    /// Chance that a classification label is redrawn uniformly.
    pub label_noise: f64,
    /// Zipf exponent of entity frequencies; 0 gives uniform sampling.
    pub skew: f64,
}

impl Default for DirtyCorpusSpec {
    fn default() -> Self {
        Self {
            n_entities: 200,
            samples: 5000,
            mix: CorruptionMix::default(),
            corruption_probability: 0.3,
            seed: 0,
            task: TaskKind::Regression,
            noise: 0.5,
            n_classes: 2,
            label_noise: 0.1,
            skew: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirtyCorpus {
    pub table: Table,
    /// Ground-truth entity of every row.
    pub entity_of_row: Vec<usize>,
    pub entity_names: Vec<String>,
}

impl DirtyCorpus {
    /// Maps every observed string to its entity.
    pub fn entity_map(&self) -> BTreeMap<&str, usize> {
        self.table
            .dirty
            .iter()
            .map(String::as_str)
            .zip(self.entity_of_row.iter().copied())
            .collect()
    }
}

const CONSONANTS: &[u8] = b"bcdfghjklmnprstvwz";
const VOWELS: &[u8] = b"aeiou";
/// Variance share of a regression entity effect not explained by its words.
const ENTITY_SHARE: f64 = 0.5;
const EXTRA_TOKENS: &[&str] = &["inc", "llc", "ltd", "corp", "co", "dept", "div", "the"];
const SPECIAL_CHARS: &[char] = &[',', '.', '-', '&', '\'', '/', '(', ')', '#'];

fn word(rng: &mut Rng) -> String {
    let syllables = rng.random_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(CONSONANTS[rng.random_range(0..CONSONANTS.len())] as char);
        w.push(VOWELS[rng.random_range(0..VOWELS.len())] as char);
        if rng.random_bool(0.3) {
            w.push(CONSONANTS[rng.random_range(0..CONSONANTS.len())] as char);
        }
    }
    w
}

/// Indices into the word vocabulary making up one entity name.
fn entity_words(vocab: usize, rng: &mut Rng) -> Vec<usize> {
    let k = rng.random_range(2..=3).min(vocab);
    rand::seq::index::sample(rng, vocab, k).into_vec()
}

fn typo(s: &str, rng: &mut Rng) -> String {
    let mut c: Vec<char> = s.chars().collect();
    let pos = rng.random_range(0..c.len().max(1));
    let new = (b'a' + rng.random_range(0..26u8)) as char;
    match rng.random_range(0..4) {
        0 if c.len() >= 2 => {
            let i = pos.min(c.len() - 2);
            c.swap(i, i + 1);
        }
        1 if !c.is_empty() => c[pos] = new,
        2 if c.len() >= 2 => {
            c.remove(pos);
        }
        _ => c.insert(pos.min(c.len()), new),
    }
    c.into_iter().collect()
}

fn abbreviate(s: &str, rng: &mut Rng) -> String {
    let words: Vec<&str> = s.split(' ').collect();
    let long: Vec<usize> = (0..words.len()).filter(|&i| words[i].chars().count() >= 4).collect();
    if long.is_empty() {
        return typo(s, rng);
    }
    let target = long[rng.random_range(0..long.len())];
    let keep = rng.random_range(1..=3);
    words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if i == target {
                let mut a: String = w.chars().take(keep).collect();
                a.push('.');
                a
            } else {
                String::from(*w)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn extraneous(s: &str, rng: &mut Rng) -> String {
    let tok = EXTRA_TOKENS[rng.random_range(0..EXTRA_TOKENS.len())];
    if tok == "the" {
        alloc::format!("the {s}")
    } else {
        alloc::format!("{s} {tok}")
    }
}

fn special(s: &str, rng: &mut Rng) -> String {
    let mut c: Vec<char> = s.chars().collect();
    let pos = rng.random_range(1..=c.len().max(1));
    c.insert(pos.min(c.len()), SPECIAL_CHARS[rng.random_range(0..SPECIAL_CHARS.len())]);
    c.into_iter().collect()
}

fn corrupt(s: &str, kind: CorruptionKind, parent: &str, rng: &mut Rng) -> String {
    match kind {
        CorruptionKind::Typo => typo(s, rng),
        CorruptionKind::Abbreviation => abbreviate(s, rng),
        CorruptionKind::ExtraneousToken => extraneous(s, rng),
        CorruptionKind::SpecialCharacters => special(s, rng),
        CorruptionKind::ConcatenatedHierarchy => alloc::format!("{parent}/{s}"),
    }
}

fn validate(spec: &DirtyCorpusSpec) -> Result<()> {
    let prob = |p: f64| (0.0..=1.0).contains(&p);
    if spec.n_entities == 0 || spec.samples == 0 {
        return Err(Error::EmptyInput("dirty corpus"));
    }
    if !prob(spec.corruption_probability) || !prob(spec.label_noise) {
        return Err(Error::InvalidParameter("probabilities must lie in [0, 1]".into()));
    }
    if !(spec.noise >= 0.0 && spec.noise.is_finite()) || !(spec.skew >= 0.0 && spec.skew.is_finite()) {
        return Err(Error::InvalidParameter("noise and skew must be non-negative".into()));
    }
    if spec.task.is_classification() {
        let want_binary = spec.task == TaskKind::BinaryClassification;
        if spec.n_classes < 2 || (want_binary && spec.n_classes != 2) || (!want_binary && spec.n_classes < 3) {
            return Err(Error::InvalidParameter(alloc::format!(
                "{} classes do not fit task `{}`",
                spec.n_classes,
                spec.task
            )));
        }
    }
    Ok(())
}

/// Generates a seeded corpus of entity names under random corruptions.
///
/// Names are two or three words from a shared vocabulary. Each entity's effect
/// mixes the effects of its words with an entity-specific part; regression
/// targets add Gaussian noise to it and classes bucket entities by it.
/// Every entity occurs at least once when `samples >= n_entities`; a corrupted
/// string that collides with another entity's string is redrawn (and falls back
/// to the clean name), so each observed string belongs to exactly one entity.
pub fn generate_dirty_corpus(spec: &DirtyCorpusSpec) -> Result<DirtyCorpus> {
    validate(spec)?;
    let mut rng = rng::seeded(spec.seed);

    let vocab_size = (spec.n_entities * 3 / 10).max(4);
    let mut vocab = Vec::with_capacity(vocab_size);
    let mut taken = BTreeSet::new();
    while vocab.len() < vocab_size {
        let w = word(&mut rng);
        if taken.insert(w.clone()) {
            vocab.push(w);
        }
    }
    let mut names = Vec::with_capacity(spec.n_entities);
    let mut words_of = Vec::with_capacity(spec.n_entities);
    taken.clear();
    let mut attempts = 0;
    while names.len() < spec.n_entities {
        attempts += 1;
        // Small vocabularies run out of word combinations; fall back to
        // fresh words.
        let words = if attempts < 50 * spec.n_entities {
            entity_words(vocab_size, &mut rng)
        } else {
            vocab.push(word(&mut rng));
            alloc::vec![vocab.len() - 1]
        };
        let n: Vec<&str> = words.iter().map(|&w| vocab[w].as_str()).collect();
        let n = n.join(" ");
        if taken.insert(n.clone()) {
            names.push(n);
            words_of.push(words);
        }
    }
    let n_parents = (spec.n_entities / 20).max(2);
    let parents: Vec<String> = (0..n_parents).map(|_| word(&mut rng)).collect();
    let parent_of: Vec<usize> = (0..spec.n_entities).map(|_| rng.random_range(0..n_parents)).collect();

    let zipf: Vec<f64> = (0..spec.n_entities)
        .map(|r| 1.0 / libm::pow((r + 1) as f64, spec.skew))
        .collect();
    let pick = WeightedIndex::new(&zipf).map_err(|_| Error::InvalidParameter("entity weights".into()))?;
    let mut entity_of_row: Vec<usize> = (0..spec.n_entities.min(spec.samples)).collect();
    while entity_of_row.len() < spec.samples {
        entity_of_row.push(pick.sample(&mut rng));
    }
    entity_of_row.shuffle(&mut rng);

    let kinds = WeightedIndex::new(spec.mix.weights()).map_err(|_| Error::InvalidParameter("corruption mix".into()))?;
    let mut owner: BTreeMap<String, usize> = names.iter().cloned().zip(0..).collect();
    let mut dirty = Vec::with_capacity(spec.samples);
    for &e in &entity_of_row {
        let mut value = names[e].clone();
        if rng.random_bool(spec.corruption_probability) {
            for _attempt in 0..5 {
                let mut s = names[e].clone();
                let mut applied = 0;
                loop {
                    let kind = CorruptionKind::ALL[kinds.sample(&mut rng)];
                    s = corrupt(&s, kind, &parents[parent_of[e]], &mut rng);
                    applied += 1;
                    if applied == 3 || !rng.random_bool(spec.corruption_probability) {
                        break;
                    }
                }
                if owner.get(&s).is_none_or(|&o| o == e) {
                    value = s;
                    break;
                }
            }
        }
        owner.entry(value.clone()).or_insert(e);
        dirty.push(value);
    }

    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let word_effect: Vec<f64> = (0..vocab.len()).map(|_| unit.sample(&mut rng)).collect();
    let effect: Vec<f64> = words_of
        .iter()
        .map(|ws| {
            let shared: f64 = ws.iter().map(|&w| word_effect[w]).sum::<f64>() / libm::sqrt(ws.len() as f64);
            libm::sqrt(1.0 - ENTITY_SHARE) * shared + libm::sqrt(ENTITY_SHARE) * unit.sample(&mut rng)
        })
        .collect();
    let target = match spec.task {
        TaskKind::Regression => {
            let y = entity_of_row
                .iter()
                .map(|&e| effect[e] + spec.noise * unit.sample(&mut rng))
                .collect();
            Target::Continuous(y)
        }
        _ => {
            // Entities sorted by effect are dealt into k equally sized classes.
            let k = spec.n_classes;
            let mut order: Vec<usize> = (0..spec.n_entities).collect();
            order.sort_by(|&a, &b| effect[a].total_cmp(&effect[b]));
            let mut class_of = alloc::vec![0; spec.n_entities];
            for (rank, &e) in order.iter().enumerate() {
                class_of[e] = rank * k / spec.n_entities;
            }
            let labels = entity_of_row
                .iter()
                .map(|&e| {
                    if rng.random_bool(spec.label_noise) {
                        rng.random_range(0..k)
                    } else {
                        class_of[e]
                    }
                })
                .collect();
            let width = alloc::format!("{}", k - 1).len();
            let names = (0..k).map(|c| alloc::format!("c{c:0width$}")).collect();
            Target::Classes { labels, names }
        }
    };

    Ok(DirtyCorpus {
        table: Table::new("entity", dirty, "y", target),
        entity_of_row,
        entity_names: names,
    })
}

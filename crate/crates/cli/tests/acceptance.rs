//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use dirtyenc::runner::{run_grid, GridOptions};
use dirtyenc_core::encoders::{EncoderSpec, FittedEncoder};
use dirtyenc_core::learners::{ridge_solve, DEFAULT_LAMBDA_GRID};
use dirtyenc_core::pipeline::{
    generate_dirty_corpus, run_cell_detailed, split_for, BenchmarkConfig, DirtyCorpusSpec, LearnerConfig, Method,
    Table,
};
use dirtyenc_core::reduction::ProjectionMatrix;
use dirtyenc_core::similarity::{levenshtein_distance, sim_ngram, similarity_histogram, EditWeights, SimilarityMeasure};
use dirtyenc_core::{FeatureMatrix, Target, TaskKind};
use rand::Rng;

type Outcome = Result<String, String>;

fn within(limit: Duration, elapsed: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Ok(detail)
    } else {
        Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn similarity_axioms() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(2024);
    let alphabet: Vec<char> = "abcdé xyz-".chars().collect();
    let measures = [
        SimilarityMeasure::LevenshteinRatio,
        SimilarityMeasure::JaroWinkler { p: 0.1 },
        SimilarityMeasure::NGram { n: 2 },
        SimilarityMeasure::NGram { n: 3 },
        SimilarityMeasure::ExactMatch,
    ];
    for m in &measures {
        for _ in 0..1000 {
            let a = random_string(&mut rng, &alphabet, 12);
            let b = random_string(&mut rng, &alphabet, 12);
            let ab = m.similarity(&a, &b);
            let ba = m.similarity(&b, &a);
            if ab.to_bits() != ba.to_bits() {
                return Err(format!("{m}: sim({a:?}, {b:?}) = {ab} but reversed {ba}"));
            }
            if !(0.0..=1.0).contains(&ab) {
                return Err(format!("{m}: sim({a:?}, {b:?}) = {ab} outside [0, 1]"));
            }
            for s in [&a, &b] {
                if m.similarity(s, s) != 1.0 {
                    return Err(format!("{m}: sim({s:?}, {s:?}) != 1"));
                }
            }
        }
    }
    within(Duration::from_secs(5), start.elapsed(), format!("{} measures x 1000 pairs", measures.len()))
}

fn worked_example() -> Outcome {
    let s = sim_ngram("paris", "parisian", 3).map_err(|e| e.to_string())?;
    if s == 0.5 {
        Ok("sim_ngram(paris, parisian, 3) = 0.5".into())
    } else {
        Err(format!("got {s}"))
    }
}

fn levenshtein_oracles() -> Outcome {
    let start = Instant::now();
    let abc = ['a', 'b', 'c'];
    let strings = all_strings(&abc, 5);
    let w = EditWeights::default();
    let mut pairs = 0;
    for s1 in &strings {
        let reach = edit_search_from(s1, &abc, 6);
        for s2 in &strings {
            let d = levenshtein_distance(s1, s2, &w);
            if d != reach[s2] as f64 {
                return Err(format!("d({s1:?}, {s2:?}) = {d}, edit search says {}", reach[s2]));
            }
            let lcs = s1.len() + s2.len() - 2 * lcs_brute(s1, s2);
            if d != lcs as f64 {
                return Err(format!("d({s1:?}, {s2:?}) = {d}, LCS identity says {lcs}"));
            }
            pairs += 1;
        }
    }
    within(Duration::from_secs(60), start.elapsed(), format!("{pairs} pairs agree with edit search and LCS"))
}

fn one_hot_degeneracy() -> Outcome {
    let mut rng = seeded(7);
    let alphabet: Vec<char> = "ab é".chars().collect();
    let mut fixtures: Vec<Vec<String>> = vec![
        ["a", "b", "a", "c"].map(String::from).to_vec(),
        ["paris", "Paris", "paris ", "", "lyon"].map(String::from).to_vec(),
    ];
    for _ in 0..20 {
        fixtures.push((0..30).map(|_| random_string(&mut rng, &alphabet, 3)).collect());
    }
    let mut unseen_rows = 0;
    for (f, col) in fixtures.iter().enumerate() {
        let one_hot = FittedEncoder::fit(EncoderSpec::OneHot, col, None).map_err(|e| e.to_string())?;
        let exact = FittedEncoder::fit(EncoderSpec::Similarity(SimilarityMeasure::ExactMatch), col, None)
            .map_err(|e| e.to_string())?;
        let mut probe = col.clone();
        probe.extend((0..20).map(|_| random_string(&mut rng, &alphabet, 4)));
        probe.push("never seen".into());
        let a = one_hot.transform(&probe);
        let b = exact.transform(&probe);
        let bits = |m: &FeatureMatrix| m.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        if a.shape() != b.shape() || bits(&a) != bits(&b) {
            return Err(format!("fixture {f}: matrices differ"));
        }
        for (i, v) in probe.iter().enumerate() {
            if one_hot.domain().index_of(v).is_none() {
                unseen_rows += 1;
                if b.row(i).iter().any(|&x| x != 0.0) {
                    return Err(format!("fixture {f}: unseen {v:?} is not the zero vector"));
                }
            }
        }
    }
    Ok(format!("{} fixture columns bit-identical, {unseen_rows} unseen rows are zero", fixtures.len()))
}

fn kernel_identity() -> Outcome {
    let mut rng = seeded(11);
    let alphabet: Vec<char> = "abcdefgh".chars().collect();
    let mut domain: Vec<String> = Vec::new();
    while domain.len() < 50 {
        let s = random_string(&mut rng, &alphabet, 8);
        if !domain.contains(&s) {
            domain.push(s);
        }
    }
    let mut worst: f64 = 0.0;
    for m in [
        SimilarityMeasure::NGram { n: 3 },
        SimilarityMeasure::LevenshteinRatio,
        SimilarityMeasure::JaroWinkler { p: 0.1 },
    ] {
        let enc = FittedEncoder::fit(EncoderSpec::Similarity(m), &domain, None).map_err(|e| e.to_string())?;
        let x = enc.transform(&domain);
        for i in 0..domain.len() {
            for j in 0..domain.len() {
                let kernel: f64 = domain.iter().map(|d| m.similarity(&domain[i], d) * m.similarity(&domain[j], d)).sum();
                let dot: f64 = x.row(i).iter().zip(x.row(j)).map(|(a, b)| a * b).sum();
                worst = worst.max((kernel - dot).abs());
            }
        }
    }
    if worst <= 1e-12 {
        Ok(format!("max |k - <x_i, x_j>| = {worst:e} on 50 categories"))
    } else {
        Err(format!("max deviation {worst:e}"))
    }
}

fn jl_property() -> Outcome {
    let start = Instant::now();
    let (p, d, pairs) = (2000, 1000, 100);
    let mut rng = seeded(99);
    let normal = rand_distr::StandardNormal;
    let rows: Vec<Vec<f64>> = (0..2 * pairs)
        .map(|_| {
            let v: Vec<f64> = (0..p).map(|_| rng.sample::<f64, _>(normal)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    let x = FeatureMatrix::from_rows(&rows).map_err(|e| e.to_string())?;
    let r = ProjectionMatrix::gaussian(p, d, 5).map_err(|e| e.to_string())?;
    let y = r.project(&x).map_err(|e| e.to_string())?;
    let kept = (0..pairs)
        .filter(|&k| {
            let before = sq_dist(x.row(2 * k), x.row(2 * k + 1));
            let after = sq_dist(y.row(2 * k), y.row(2 * k + 1));
            (0.8 * before..=1.2 * before).contains(&after)
        })
        .count();
    let detail = format!("{kept}/{pairs} pairs within ±20%");
    if kept < 95 {
        return Err(detail);
    }
    within(Duration::from_secs(30), start.elapsed(), detail)
}

fn leakage_table(task: TaskKind) -> Table {
    let spec = DirtyCorpusSpec {
        n_entities: 40,
        samples: 400,
        task,
        seed: 3,
        ..Default::default()
    };
    let mut t = generate_dirty_corpus(&spec).unwrap().table;
    let mut rng = seeded(4);
    let n = t.n_rows();
    t.categoricals.push(("city".into(), (0..n).map(|_| ["x", "y", "z"][rng.random_range(0..3)].into()).collect()));
    t.numericals.push(("amount".into(), (0..n).map(|_| rng.random_range(-5.0..5.0)).collect()));
    t
}

/// Rewrites every test row of `split`. Binary labels stay put, since they
/// decide the stratified split itself.
fn tamper(t: &Table, test: &[usize]) -> Table {
    let mut out = t.clone();
    for &i in test {
        out.dirty[i] = format!("tampered {i}");
        out.categoricals[0].1[i] = format!("new{i}");
        out.numericals[0].1[i] = 1e6 + i as f64;
        if let Target::Continuous(y) = &mut out.target {
            y[i] = -1e3 * i as f64;
        }
    }
    out
}

fn leakage_guard() -> Outcome {
    let cases: [(TaskKind, &[&str]); 2] = [
        (
            TaskKind::Regression,
            &[
                "one_hot",
                "similarity:ngram3",
                "similarity:lev_ratio@projection:20",
                "similarity:ngram3@kmeans:10",
                "one_hot@most_frequent:10",
                "similarity:jaro_winkler@dedup_merge:10",
                "target",
                "bag_of_ngrams:3",
                "hashing:64",
                "cluster_one_hot:5",
            ],
        ),
        (TaskKind::BinaryClassification, &["mdv", "target", "similarity:ngram2@kmeans:8"]),
    ];
    let mut checked = 0;
    for (task, methods) in cases {
        let table = leakage_table(task);
        let cfg = BenchmarkConfig {
            methods: methods.iter().map(|m| m.parse::<Method>().unwrap()).collect(),
            n_splits: 2,
            learner: LearnerConfig {
                logistic: dirtyenc_core::learners::LogisticConfig {
                    max_iter: 50,
                    ..Default::default()
                },
                ..Default::default()
            },
            seed: 8,
            ..Default::default()
        };
        for split in 0..cfg.n_splits {
            let (_, test) = split_for(&table, task, &cfg, split).map_err(|e| e.to_string())?;
            let tampered = tamper(&table, &test);
            if split_for(&tampered, task, &cfg, split).map_err(|e| e.to_string())?.1 != test {
                return Err("tampering moved the split".into());
            }
            for m in 0..cfg.methods.len() {
                let a = run_cell_detailed(&table, task, &cfg, m, split).map_err(|e| e.to_string())?;
                let b = run_cell_detailed(&tampered, task, &cfg, m, split).map_err(|e| e.to_string())?;
                if a.assembler != b.assembler {
                    return Err(format!("{}: fitted encoder or scaler changed with test rows", cfg.methods[m]));
                }
                if a.model != b.model {
                    return Err(format!("{}: fitted model changed with test rows", cfg.methods[m]));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} cells: encoder state, prototypes, scaler and model unchanged"))
}

fn directional_benchmark(table: &Table) -> Outcome {
    let start = Instant::now();
    let methods = ["one_hot", "similarity:ngram3", "similarity:ngram3@kmeans:100"];
    let cfg = BenchmarkConfig {
        methods: methods.iter().map(|m| m.parse().unwrap()).collect(),
        n_splits: 20,
        seed: 0,
        ..Default::default()
    };
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let records = run_grid(table, TaskKind::Regression, &cfg, GridOptions { jobs, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let median = |m: usize| {
        let mut s: Vec<f64> = records.iter().filter(|r| r.method == m).map(|r| r.score).collect();
        s.sort_by(f64::total_cmp);
        (s[9] + s[10]) / 2.0
    };
    let (one_hot, ngram, reduced) = (median(0), median(1), median(2));
    let detail = format!("median R²: one_hot {one_hot:.4}, ngram3 {ngram:.4}, ngram3@kmeans:100 {reduced:.4}");
    if !(ngram > one_hot && reduced > one_hot) {
        return Err(detail);
    }
    within(Duration::from_secs(600), start.elapsed(), detail)
}

fn histogram_claim(table: &Table) -> Outcome {
    let h = |m| similarity_histogram(&table.dirty, &m, 10_000, 20, 0).map(|h| h.median).map_err(|e| e.to_string());
    let ngram = h(SimilarityMeasure::NGram { n: 3 })?;
    let lev = h(SimilarityMeasure::LevenshteinRatio)?;
    let detail = format!("median ngram3 {ngram:.4}, lev_ratio {lev:.4} over 10000 pairs");
    if ngram <= lev {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn learner_correctness() -> Outcome {
    let mut rng = seeded(10);
    let mut worst_ridge: f64 = 0.0;
    for case in 0..20 {
        let n = rng.random_range(5..40);
        let p = rng.random_range(1..30);
        let x = random_matrix(&mut rng, n, p);
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let lambda = DEFAULT_LAMBDA_GRID[case % 3];
        let (w, _) = ridge_solve(&x, &y, lambda).map_err(|e| e.to_string())?;
        worst_ridge = worst_ridge.max(normal_equation_residual(&x, &y, lambda, &w));
    }
    let mut worst_grad: f64 = 0.0;
    for case in 0..10 {
        let classes = 2 + case % 3;
        let x = random_matrix(&mut rng, 15, 4);
        let labels: Vec<usize> = (0..15).map(|i| i % classes).collect();
        let w = random_matrix(&mut rng, classes, 4);
        let b: Vec<f64> = (0..classes).map(|_| rng.random_range(-1.0..1.0)).collect();
        worst_grad = worst_grad.max(central_difference_error(&x, &labels, &w, &b, [0.0, 0.01, 0.1][case % 3]));
    }
    let detail = format!("ridge residual {worst_ridge:e} (20 instances), logistic gradient error {worst_grad:e}");
    if worst_ridge < 1e-8 && worst_grad < 1e-5 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn reproducibility() -> Outcome {
    let tmp = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let run = |args: &[&str]| -> Result<(), String> {
        let out = Command::new(env!("CARGO_BIN_EXE_dirtyenc"))
            .arg("--quiet")
            .args(args)
            .env_remove("DIRTY_ENCODE_SEED")
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.success() {
            Ok(())
        } else {
            Err(String::from_utf8_lossy(&out.stderr).into_owned())
        }
    };
    let corpus = dir.join("corpus");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    run(&["generate-dirty", "--entities", "60", "--samples", "600", "--seed", "1", "--out-dir", &s(&corpus)])?;
    let input = s(&corpus.join("dirty.csv"));
    let bench = |out: &Path, jobs: &str| {
        run(&[
            "benchmark", "--input", &input, "--column", "entity", "--target", "y", "--task", "regression", "--splits",
            "5", "--seed", "17", "--jobs", jobs, "--method", "one_hot", "--method", "target", "--measure", "ngram3",
            "--measure", "lev_ratio", "--reduce", "kmeans", "--d", "20", "--d", "full", "--out-dir", &s(out),
        ])
    };
    bench(&dir.join("a"), "1")?;
    bench(&dir.join("b"), "1")?;
    bench(&dir.join("c"), "4")?;
    let files = ["results.csv", "summary.csv", "boxplot.csv", "splits.csv", "config.resolved.toml"];
    for f in files {
        let a = fs::read(dir.join("a").join(f)).map_err(|e| e.to_string())?;
        for other in ["b", "c"] {
            if fs::read(dir.join(other).join(f)).map_err(|e| e.to_string())? != a {
                return Err(format!("{f} differs between runs"));
            }
        }
    }
    Ok(format!("{} files byte-identical across 2 runs and --jobs 1/4", files.len()))
}

fn main() {
    let corpus = generate_dirty_corpus(&DirtyCorpusSpec::default()).expect("default corpus");
    let table = corpus.table;
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("similarity axioms", Box::new(similarity_axioms)),
        ("worked example", Box::new(worked_example)),
        ("levenshtein oracle equivalence", Box::new(levenshtein_oracles)),
        ("one-hot degeneracy", Box::new(one_hot_degeneracy)),
        ("kernel identity", Box::new(kernel_identity)),
        ("JL property", Box::new(jl_property)),
        ("leakage guard", Box::new(leakage_guard)),
        ("directional benchmark", Box::new(|| directional_benchmark(&table))),
        ("histogram claim", Box::new(|| histogram_claim(&table))),
        ("learner correctness", Box::new(learner_correctness)),
        ("reproducibility", Box::new(reproducibility)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

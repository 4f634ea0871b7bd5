use std::path::{Path, PathBuf};

use dirtyenc_core::encoders::EncoderSpec;
use dirtyenc_core::learners::{ClassWeighting, LogisticConfig, DEFAULT_FOLDS, DEFAULT_LAMBDA_GRID, DEFAULT_REG_GRID};
use dirtyenc_core::pipeline::{
    cardinality_curve, fit_method, generate_dirty_corpus, log_spaced_checkpoints, split_for, BenchmarkConfig,
    BenchmarkResult, CorruptionMix, DirtyCorpusSpec, LearnerConfig, Method, Reduction,
};
use dirtyenc_core::similarity::{similarity_histogram, SimilarityMeasure};
use dirtyenc_core::{Error as CoreError, Target, TaskKind};

use crate::args::*;
use crate::config::{Dim, FileConfig, DEFAULT_SAMPLE_CAP};
use crate::error::{CliError, CliResult};
use crate::ingest::{ingest, Ingested, RawCsv, Roles};
use crate::output::{self, ensure_dir, write_csv, write_text};
use crate::runner::{run_grid, score_external, GridOptions};
use crate::state::{self, StateObject};

pub const DEFAULT_OUT_DIR: &str = "dirtyenc-out";
pub const DEFAULT_ENCODE_METHOD: &str = "similarity:ngram3";
pub const DEFAULT_METHODS: [&str; 8] = [
    "one_hot",
    "hashing:256",
    "target",
    "mdv",
    "bag_of_ngrams:3",
    "similarity:lev_ratio",
    "similarity:jaro_winkler",
    "similarity:ngram3",
];
pub const DEFAULT_D_SWEEP: [Dim; 4] = [Dim::N(30), Dim::N(100), Dim::N(300), Dim::FULL];
pub const DEFAULT_HISTOGRAM_MEASURES: [&str; 3] = ["lev_ratio", "jaro_winkler", "ngram3"];

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Encode(a) => encode(&a),
        Command::Benchmark(a) => benchmark(&a),
        Command::Histogram(a) => histogram(&a),
        Command::Cardinality(a) => cardinality(&a),
        Command::GenerateDirty(a) => generate_dirty(&a),
        Command::Inspect(a) => inspect(&a),
    }
}

/// Missing targets and bad parameters are the caller's fault; everything
/// else is about the data.
fn core_error(e: CoreError) -> CliError {
    match e {
        CoreError::InvalidParameter(_) | CoreError::MissingTarget(_) => CliError::config(e),
        _ => CliError::data(e),
    }
}

/// Loads the config file and applies the data flags on top of it.
fn resolve_data(a: &DataArgs) -> CliResult<FileConfig> {
    let mut cfg = match &a.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let d = &mut cfg.data;
    macro_rules! flag {
        ($field:ident) => {
            if a.$field.is_some() {
                d.$field = a.$field.clone();
            }
        };
    }
    flag!(input);
    flag!(column);
    flag!(target);
    flag!(task);
    flag!(sample_cap);
    if !a.categoricals.is_empty() {
        d.categoricals = Some(a.categoricals.clone());
    }
    if !a.numericals.is_empty() {
        d.numericals = Some(a.numericals.clone());
    }
    d.sample_cap.get_or_insert(DEFAULT_SAMPLE_CAP);
    d.categoricals.get_or_insert_with(Vec::new);
    d.numericals.get_or_insert_with(Vec::new);
    cfg.run.seed = Some(crate::config::resolve_seed(a.seed, cfg.run.seed)?);
    if a.out_dir.is_some() {
        cfg.run.out_dir = a.out_dir.clone();
    }
    cfg.run.out_dir.get_or_insert_with(|| PathBuf::from(DEFAULT_OUT_DIR));
    Ok(cfg)
}

fn parse_task(s: Option<&str>) -> CliResult<Option<TaskKind>> {
    s.map(|t| t.parse().map_err(CliError::config)).transpose()
}

fn load_data(cfg: &FileConfig) -> CliResult<Ingested> {
    let d = &cfg.data;
    let input = d.input.as_ref().ok_or_else(|| CliError::Config("no input file (--input)".into()))?;
    let roles = Roles {
        column: d.column.clone().ok_or_else(|| CliError::Config("no dirty column (--column)".into()))?,
        target: d.target.clone(),
        task: parse_task(d.task.as_deref())?,
        categoricals: d.categoricals.clone().unwrap_or_default(),
        numericals: d.numericals.clone().unwrap_or_default(),
        sample_cap: d.sample_cap,
    };
    let raw = RawCsv::read(input)?;
    let data = ingest(&raw, &roles, seed(cfg))?;
    log::info!(
        "{}: {} rows kept, {} dropped, {} distinct `{}` values",
        input.display(),
        data.n_rows(),
        data.dropped,
        data.dirty.iter().collect::<std::collections::BTreeSet<_>>().len(),
        roles.column
    );
    Ok(data)
}

fn seed(cfg: &FileConfig) -> u64 {
    cfg.run.seed.expect("seed is resolved")
}

fn out_dir(cfg: &FileConfig) -> CliResult<PathBuf> {
    let dir = cfg.run.out_dir.clone().expect("out dir is resolved");
    ensure_dir(&dir)?;
    Ok(dir)
}

/// Records everything but the output directory the file is written to.
fn write_resolved(dir: &Path, cfg: &FileConfig) -> CliResult<()> {
    let mut cfg = cfg.clone();
    cfg.run.out_dir = None;
    let text = cfg.to_toml();
    log::info!("resolved config:\n{text}");
    write_text(&dir.join("config.resolved.toml"), &text)
}

fn parse_method(s: &str) -> CliResult<Method> {
    s.parse().map_err(CliError::config)
}

fn encode_method(a: &EncodeArgs) -> CliResult<Method> {
    let base = match (&a.method, &a.measure) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either --method or --measure".into())),
        (Some(m), None) => m.clone(),
        (None, Some(m)) => format!("similarity:{m}"),
        (None, None) => DEFAULT_ENCODE_METHOD.to_string(),
    };
    let method = parse_method(&base)?;
    match &a.reduce {
        None => {
            if a.d.is_some() {
                return Err(CliError::Config("--d needs --reduce".into()));
            }
            Ok(method)
        }
        Some(r) => {
            if method.reduction != Reduction::None {
                return Err(CliError::Config(format!("`{base}` already names a reduction")));
            }
            let reduction = Reduction::from_parts(r, a.d).map_err(CliError::config)?;
            Method::new(method.encoder, reduction).map_err(CliError::config)
        }
    }
}

pub fn encode(a: &EncodeArgs) -> CliResult<()> {
    let mut cfg = resolve_data(&a.data)?;
    let data = load_data(&cfg)?;
    let dir = out_dir(&cfg)?;
    let encoder = match &a.state {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let enc = state::parse_encoder(&text)?;
            log::info!("loaded `{}` encoder from {}", enc.spec(), path.display());
            enc
        }
        None => {
            let method = encode_method(a)?;
            cfg.benchmark.methods = Some(vec![method.to_string()]);
            let target = data.target.as_ref().map(|t| &t.1);
            if method.encoder.requires_target() && target.is_none() {
                return Err(CliError::Config(format!("`{method}` needs a target column (--target)")));
            }
            let enc = fit_method(&method, &data.dirty, target, seed(&cfg)).map_err(core_error)?;
            let path = dir.join("encoder.state");
            write_text(&path, &state::encoder_to_string(&enc))?;
            log::info!("fitted `{method}`: {} columns; state in {}", enc.output_dim(), path.display());
            enc
        }
    };
    let x = encoder.transform(&data.dirty);
    output::write_features(&dir.join("features.csv"), &x)?;
    write_resolved(&dir, &cfg)
}

/// Expands the method list over the reduction sweep. Methods the reduction
/// does not apply to are kept as they are.
fn expand_methods(base: &[String], reduce: Option<&str>, dims: &[Dim]) -> CliResult<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    let mut push = |m: Method| {
        let s = m.to_string();
        if !out.contains(&s) {
            out.push(s);
        }
    };
    for s in base {
        let m = parse_method(s)?;
        match reduce {
            Some(r) if r != "none" && m.reduction == Reduction::None => {
                let probe = Reduction::from_parts(r, Some(1)).map_err(CliError::config)?;
                if Method::new(m.encoder, probe).is_err() {
                    push(m);
                    continue;
                }
                for d in dims {
                    match d {
                        Dim::N(d) => {
                            let reduction = Reduction::from_parts(r, Some(*d)).map_err(CliError::config)?;
                            push(Method::new(m.encoder, reduction).map_err(CliError::config)?)
                        }
                        Dim::Full(_) => push(m),
                    }
                }
            }
            _ => push(m),
        }
    }
    Ok(out)
}

fn parse_dims(flags: &[String]) -> CliResult<Vec<Dim>> {
    flags
        .iter()
        .map(|s| match s.as_str() {
            "full" => Ok(Dim::FULL),
            n => n
                .parse()
                .map(Dim::N)
                .map_err(|_| CliError::Config(format!("--d `{n}` is neither a number nor `full`"))),
        })
        .collect()
}

/// Applies benchmark flags and defaults, leaving a config that reproduces the
/// run. Also says whether the method list is the default panel.
fn resolve_benchmark(a: &BenchmarkArgs) -> CliResult<(FileConfig, bool)> {
    let mut cfg = resolve_data(&a.data)?;
    let b = &mut cfg.benchmark;
    let mut base: Vec<String> = a.methods.clone();
    base.extend(a.measures.iter().map(|m| format!("similarity:{m}")));
    let defaulted = base.is_empty() && b.methods.is_none();
    if base.is_empty() {
        base = b
            .methods
            .clone()
            .unwrap_or_else(|| DEFAULT_METHODS.iter().map(|s| s.to_string()).collect());
    }
    let reduce = a.reduce.clone().or(b.reduce.take());
    let dims = if a.d.is_empty() {
        b.d.take().unwrap_or_else(|| DEFAULT_D_SWEEP.to_vec())
    } else {
        parse_dims(&a.d)?
    };
    b.methods = Some(expand_methods(&base, reduce.as_deref(), &dims)?);
    b.d = None;
    b.splits = a.splits.or(b.splits).or(Some(100));
    b.test_fraction = a.test_frac.or(b.test_fraction).or(Some(0.2));
    b.center = Some(a.center || b.center.unwrap_or(false));
    if a.predictions.is_some() {
        cfg.external.predictions = a.predictions.clone();
    }
    let l = &mut cfg.learner;
    l.lambda_grid.get_or_insert_with(|| DEFAULT_LAMBDA_GRID.to_vec());
    l.reg_grid.get_or_insert_with(|| DEFAULT_REG_GRID.to_vec());
    l.folds.get_or_insert(DEFAULT_FOLDS);
    l.class_weighting.get_or_insert_with(|| "none".into());
    let defaults = LogisticConfig::default();
    l.max_iter.get_or_insert(defaults.max_iter);
    l.step.get_or_insert(defaults.step);
    l.tol.get_or_insert(defaults.tol);
    Ok((cfg, defaulted))
}

fn benchmark_config(cfg: &FileConfig) -> CliResult<BenchmarkConfig> {
    let b = &cfg.benchmark;
    let l = &cfg.learner;
    let folds = l.folds.expect("resolved");
    let class_weighting = match l.class_weighting.as_deref() {
        Some("none") => ClassWeighting::None,
        Some("inverse_frequency") => ClassWeighting::InverseFrequency,
        other => return Err(CliError::Config(format!("unknown class_weighting {other:?}"))),
    };
    let out = BenchmarkConfig {
        methods: b.methods.iter().flatten().map(|s| parse_method(s)).collect::<CliResult<_>>()?,
        n_splits: b.splits.expect("resolved"),
        test_fraction: b.test_fraction.expect("resolved"),
        learner: LearnerConfig {
            lambda_grid: l.lambda_grid.clone().expect("resolved"),
            folds,
            logistic: LogisticConfig {
                reg_grid: l.reg_grid.clone().expect("resolved"),
                folds,
                class_weighting,
                max_iter: l.max_iter.expect("resolved"),
                step: l.step.expect("resolved"),
                tol: l.tol.expect("resolved"),
            },
        },
        seed: seed(cfg),
        center: b.center.expect("resolved"),
    };
    out.validate().map_err(CliError::config)?;
    Ok(out)
}

pub fn benchmark(a: &BenchmarkArgs) -> CliResult<()> {
    let (mut cfg, defaulted) = resolve_benchmark(a)?;
    // Thread count is logged but kept out of the output files.
    let jobs = a.jobs.or(cfg.run.jobs.take()).unwrap_or(1);
    let data = load_data(&cfg)?;
    let source_rows = data.source_rows.clone();
    let (table, task) = data.into_table()?;
    if defaulted && task == TaskKind::Regression {
        log::info!("regression task: leaving mdv out of the default methods");
        if let Some(methods) = cfg.benchmark.methods.as_mut() {
            methods.retain(|m| !m.starts_with("mdv"));
        }
    }
    let bcfg = benchmark_config(&cfg)?;
    let dir = out_dir(&cfg)?;
    write_resolved(&dir, &cfg)?;
    log::info!(
        "benchmark: {} methods × {} splits, task {task}, seed {}, {jobs} job(s)",
        bcfg.methods.len(),
        bcfg.n_splits,
        bcfg.seed
    );

    let opts = GridOptions {
        jobs,
        keep_predictions: a.export_predictions,
        keep_models: a.save_models,
    };
    let records = run_grid(&table, task, &bcfg, opts)?;
    let mut methods: Vec<String> = bcfg.methods.iter().map(Method::to_string).collect();
    let mut scores: Vec<Vec<f64>> = methods.iter().map(|_| Vec::with_capacity(bcfg.n_splits)).collect();
    for r in &records {
        scores[r.method].push(r.score);
    }
    let first = &records[..bcfg.n_splits];
    let unseen: Vec<f64> = first.iter().map(|r| r.unseen_rate).collect();

    if let Some(path) = &cfg.external.predictions {
        let ext = score_external(path, &table, task, &bcfg)?;
        for (m, s) in ext.methods.into_iter().zip(ext.scores) {
            if methods.contains(&m) {
                return Err(CliError::Config(format!("external method `{m}` clashes with a built-in method")));
            }
            log::info!("scored external method `{m}`");
            methods.push(m);
            scores.push(s);
        }
    }

    let result = BenchmarkResult::from_scores(task, methods, scores, unseen).map_err(CliError::data)?;
    let dataset = cfg
        .data
        .input
        .as_ref()
        .and_then(|p| p.file_stem())
        .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
    output::write_benchmark(&dir, &dataset, &result)?;
    write_csv(
        &dir.join("splits.csv"),
        &["split", "split_seed", "n_train", "n_test", "unseen_rate"],
        first.iter().map(|r| {
            vec![
                r.split.to_string(),
                bcfg.split_seed(r.split).to_string(),
                (table.n_rows() - r.n_test).to_string(),
                r.n_test.to_string(),
                r.unseen_rate.to_string(),
            ]
        }),
    )?;
    if a.export_predictions {
        write_csv(
            &dir.join("predictions.csv"),
            &["method", "split", "row_id", "prediction"],
            records.iter().flat_map(|r| {
                let m = result.methods[r.method].clone();
                r.predictions
                    .iter()
                    .map(move |(row, p)| vec![m.clone(), r.split.to_string(), row.to_string(), p.clone()])
            }),
        )?;
    }
    if a.export_splits {
        let mut rows = Vec::new();
        for s in 0..bcfg.n_splits {
            let (train, test) = split_for(&table, task, &bcfg, s).map_err(CliError::data)?;
            for (role, idx) in [("train", train), ("test", test)] {
                for i in idx {
                    rows.push(vec![s.to_string(), i.to_string(), source_rows[i].to_string(), role.to_string()]);
                }
            }
        }
        write_csv(&dir.join("split_rows.csv"), &["split", "row_id", "source_row", "role"], rows)?;
    }
    if a.save_models {
        let models = dir.join("models");
        ensure_dir(&models)?;
        for r in &records {
            let stem = format!("{}-split{}", output::file_stem(&result.methods[r.method]), r.split);
            let files = r.models.as_ref().expect("models were kept");
            for (ext, text) in ["encoder", "scaler", "model"].iter().zip(files) {
                write_text(&models.join(format!("{stem}.{ext}.state")), text)?;
            }
        }
    }
    for (m, name) in result.methods.iter().enumerate() {
        log::info!("{name}: median {:.4}, rank {}", result.medians[m], result.ranks[m]);
    }
    Ok(())
}

pub fn histogram(a: &HistogramArgs) -> CliResult<()> {
    let cfg = resolve_data(&a.data)?;
    let data = load_data(&cfg)?;
    let dir = out_dir(&cfg)?;
    let names: Vec<String> = if a.measures.is_empty() {
        DEFAULT_HISTOGRAM_MEASURES.iter().map(|s| s.to_string()).collect()
    } else {
        a.measures.clone()
    };
    for name in &names {
        let m: SimilarityMeasure = name.parse().map_err(CliError::config)?;
        let h = similarity_histogram(&data.dirty, &m, a.pairs, a.bins, seed(&cfg)).map_err(core_error)?;
        let path = dir.join(format!("histogram_{}.tsv", output::file_stem(&m.to_string())));
        write_text(&path, &output::histogram_tsv(&h))?;
        log::info!("{m}: median similarity {} over {} pairs", h.median, a.pairs);
    }
    write_resolved(&dir, &cfg)
}

pub fn cardinality(a: &CardinalityArgs) -> CliResult<()> {
    let cfg = resolve_data(&a.data)?;
    let data = load_data(&cfg)?;
    let dir = out_dir(&cfg)?;
    let checkpoints = log_spaced_checkpoints(data.n_rows(), a.checkpoints);
    let curve = cardinality_curve(&data.dirty, &checkpoints, seed(&cfg)).map_err(core_error)?;
    write_text(&dir.join("cardinality.tsv"), &output::cardinality_tsv(&curve))?;
    write_resolved(&dir, &cfg)
}

pub fn generate_dirty(a: &GenerateArgs) -> CliResult<()> {
    let seed = crate::config::resolve_seed(a.seed, None)?;
    let mix = match &a.mix {
        None => CorruptionMix::default(),
        Some(w) => {
            let w: [f64; 5] = w
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Config("--mix takes five weights".into()))?;
            CorruptionMix::new(w).map_err(CliError::config)?
        }
    };
    let spec = DirtyCorpusSpec {
        n_entities: a.entities,
        samples: a.samples,
        mix,
        corruption_probability: a.corruption,
        seed,
        task: a.task.parse().map_err(CliError::config)?,
        noise: a.noise,
        n_classes: a.classes,
        label_noise: a.label_noise,
        skew: a.skew,
    };
    let corpus = generate_dirty_corpus(&spec).map_err(CliError::config)?;
    let dir = a.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    ensure_dir(&dir)?;
    let t = &corpus.table;
    let y: Vec<String> = match &t.target {
        Target::Continuous(v) => v.iter().map(f64::to_string).collect(),
        Target::Classes { labels, names } => labels.iter().map(|&l| names[l].clone()).collect(),
    };
    write_csv(
        &dir.join("dirty.csv"),
        &[t.dirty_name.as_str(), t.target_name.as_str()],
        t.dirty.iter().zip(y).map(|(d, y)| vec![d.clone(), y]),
    )?;
    write_csv(
        &dir.join("entities.csv"),
        &["row_id", "entity_id", "entity"],
        corpus
            .entity_of_row
            .iter()
            .enumerate()
            .map(|(i, &e)| vec![i.to_string(), e.to_string(), corpus.entity_names[e].clone()]),
    )?;
    log::info!(
        "wrote {} rows over {} entities (seed {seed}) to {}",
        t.n_rows(),
        corpus.entity_names.len(),
        dir.display()
    );
    Ok(())
}

pub fn inspect(a: &InspectArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&a.path).map_err(|e| CliError::io(&a.path, e))?;
    let obj = state::parse(&text)?;
    let again = state::to_string(&obj);
    println!("{}", describe(&obj));
    if let Some(out) = &a.out {
        write_text(out, &again)?;
    }
    if again != text {
        return Err(CliError::Data(format!("{} does not round-trip byte for byte", a.path.display())));
    }
    println!("round-trip: identical");
    Ok(())
}

fn describe(obj: &StateObject) -> String {
    match obj {
        StateObject::Encoder(e) => {
            let labels = e.column_labels();
            let shown: Vec<&str> = labels.iter().take(5).map(String::as_str).collect();
            let more = if labels.len() > 5 { ", ..." } else { "" };
            let extra = match e.spec() {
                EncoderSpec::Similarity(_) => e.projection().map_or(String::new(), |p| {
                    format!("\nprojection: {} -> {}", p.input_dim(), p.output_dim())
                }),
                _ => String::new(),
            };
            format!(
                "encoder {}\ndomain: {} categories, {} rows\noutput columns: {} ({}{more}){extra}",
                e.spec(),
                e.domain().len(),
                e.domain().total_count(),
                e.output_dim(),
                shown.join(", ")
            )
        }
        StateObject::Scaler(s) => format!("scaler over {} columns, centered: {}", s.scale.len(), s.mean.is_some()),
        StateObject::Ridge(m) => format!(
            "ridge over {} features, lambda {} chosen from {:?}",
            m.weights.len(),
            m.chosen_lambda,
            m.lambda_grid
        ),
        StateObject::Logistic(m) => format!(
            "logistic with {} classes over {} features, regularization {}",
            m.n_classes(),
            m.weights.cols(),
            m.chosen_reg
        ),
    }
}

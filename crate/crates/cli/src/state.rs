//! Versioned flat-file format for fitted encoders, scalers and models.
//!
//! One record per line, `key token...`, tokens separated by single spaces.
//! The first line is `dirtyenc-state 1`, the second names the object, the
//! last is `end`. Strings are escaped so they never contain whitespace:
//! `\\`, `\s` (space), `\t`, `\n`, `\r`, and `\e` for the empty string.
//! Floats use the shortest representation that parses back to the same
//! value, so parsing and writing again reproduces a file byte for byte.
//! FORMAT.md at the repository root lists every record.

use std::fmt::Display;
use std::str::FromStr;

use dirtyenc_core::encoders::{CategoryDomain, EncoderSpec, EncoderState, FittedEncoder, TargetStats};
use dirtyenc_core::learners::{ClassWeighting, LogisticModel, RidgeModel};
use dirtyenc_core::pipeline::Scaler;
use dirtyenc_core::reduction::{ProjectionMatrix, PrototypeSet};
use dirtyenc_core::{FeatureMatrix, TaskKind};

use crate::error::{CliError, CliResult};

pub const MAGIC: &str = "dirtyenc-state";
pub const VERSION: u32 = 1;

/// Anything the format can hold.
#[derive(Debug, Clone, PartialEq)]
pub enum StateObject {
    Encoder(FittedEncoder),
    Scaler(Scaler),
    Ridge(RidgeModel),
    Logistic(LogisticModel),
}

impl StateObject {
    pub fn kind(&self) -> &'static str {
        match self {
            StateObject::Encoder(_) => "encoder",
            StateObject::Scaler(_) => "scaler",
            StateObject::Ridge(_) => "ridge",
            StateObject::Logistic(_) => "logistic",
        }
    }
}

pub fn escape(s: &str) -> String {
    if s.is_empty() {
        return "\\e".into();
    }
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            ' ' => out.push_str("\\s"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape(s: &str) -> Option<String> {
    if s == "\\e" {
        return Some(String::new());
    }
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            's' => ' ',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

struct Writer(String);

impl Writer {
    fn line<I, T>(&mut self, key: &str, tokens: I)
    where
        I: IntoIterator<Item = T>,
        T: Display,
    {
        self.0.push_str(key);
        for t in tokens {
            self.0.push(' ');
            self.0.push_str(&t.to_string());
        }
        self.0.push('\n');
    }

    fn vector(&mut self, key: &str, v: &[f64]) {
        self.line(key, std::iter::once(v.len().to_string()).chain(v.iter().map(f64::to_string)));
    }

    fn rows(&mut self, key: &str, rows: &[Vec<f64>]) {
        self.line(key, [rows.len()]);
        for r in rows {
            self.vector("row", r);
        }
    }
}

pub fn to_string(obj: &StateObject) -> String {
    let mut w = Writer(String::new());
    w.line(MAGIC, [VERSION]);
    w.line("object", [obj.kind()]);
    match obj {
        StateObject::Encoder(e) => write_encoder(&mut w, e),
        StateObject::Scaler(s) => {
            w.vector("scale", &s.scale);
            match &s.mean {
                None => w.line("mean", ["none"]),
                Some(m) => w.vector("mean", m),
            }
        }
        StateObject::Ridge(m) => {
            w.vector("weights", &m.weights);
            w.line("intercept", [m.intercept]);
            w.line("chosen_lambda", [m.chosen_lambda]);
            w.vector("lambda_grid", &m.lambda_grid);
            w.line("cv_folds", [m.cv_folds]);
            w.vector("cv_scores", &m.cv_scores);
        }
        StateObject::Logistic(m) => {
            let (r, c) = m.weights.shape();
            w.line(
                "weights",
                [r.to_string(), c.to_string()]
                    .into_iter()
                    .chain(m.weights.as_slice().iter().map(f64::to_string)),
            );
            w.vector("intercepts", &m.intercepts);
            w.line("chosen_reg", [m.chosen_reg]);
            w.line("class_weighting", [weighting_name(m.class_weighting)]);
            w.vector("cv_scores", &m.cv_scores);
            w.vector("loss_history", &m.loss_history);
        }
    }
    w.line::<[&str; 0], &str>("end", []);
    w.0
}

pub fn encoder_to_string(e: &FittedEncoder) -> String {
    to_string(&StateObject::Encoder(e.clone()))
}

fn weighting_name(w: ClassWeighting) -> &'static str {
    match w {
        ClassWeighting::None => "none",
        ClassWeighting::InverseFrequency => "inverse_frequency",
    }
}

fn write_stats(w: &mut Writer, s: &TargetStats) {
    w.line("stats", [s.task.to_string(), s.shrinkage.to_string()]);
    w.vector("prior", &s.prior);
    w.rows("conditional", &s.conditional);
    w.rows("class_conditional", &s.class_conditional);
}

fn write_encoder(w: &mut Writer, e: &FittedEncoder) {
    w.line("spec", [e.spec()]);
    let d = e.domain();
    w.line("domain", [d.len()]);
    for (c, f) in d.categories().iter().zip(d.frequencies()) {
        w.line("category", [escape(c), f.to_string()]);
    }
    let kind = e.spec().kind_name();
    w.line("state", [kind]);
    match e.state() {
        EncoderState::OneHot | EncoderState::Hashing => {}
        EncoderState::Similarity { prototypes: None } => w.line("prototypes", ["none"]),
        EncoderState::Similarity { prototypes: Some(p) } => {
            w.line("prototypes", [p.method.to_string(), p.len().to_string()]);
            for c in &p.prototypes {
                w.line("prototype", [escape(c)]);
            }
        }
        EncoderState::Target(s) | EncoderState::Mdv(s) => write_stats(w, s),
        EncoderState::BagOfNgrams { vocab } => {
            w.line("vocab", [vocab.len()]);
            for g in vocab {
                w.line("gram", [escape(g)]);
            }
        }
        EncoderState::ClusterOneHot { assignment, n_clusters } => {
            w.line("clusters", [n_clusters]);
            w.line(
                "assignment",
                std::iter::once(assignment.len()).chain(assignment.iter().copied()),
            );
        }
    }
    match e.projection() {
        None => w.line("projection", ["none"]),
        Some(p) => match p.seed() {
            Some(seed) => w.line("projection", ["gaussian".to_string(), p.input_dim().to_string(), p.output_dim().to_string(), seed.to_string()]),
            None => w.line("projection", ["identity".to_string(), p.input_dim().to_string()]),
        },
    }
}

struct Reader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    line_no: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().enumerate(),
            line_no: 0,
        }
    }

    fn err(&self, msg: impl Display) -> CliError {
        CliError::Data(format!("state file line {}: {msg}", self.line_no))
    }

    /// Tokens after `key` on the next line.
    fn next(&mut self, key: &str) -> CliResult<Vec<&'a str>> {
        let (i, line) = self.lines.next().ok_or_else(|| {
            CliError::Data(format!("state file ends early, expected `{key}`"))
        })?;
        self.line_no = i + 1;
        let mut toks = line.split(' ');
        match toks.next() {
            Some(k) if k == key => Ok(toks.collect()),
            other => Err(self.err(format!("expected `{key}`, found `{}`", other.unwrap_or("")))),
        }
    }

    fn one(&mut self, key: &str) -> CliResult<&'a str> {
        match self.next(key)?[..] {
            [t] => Ok(t),
            _ => Err(self.err(format!("`{key}` takes one value"))),
        }
    }

    fn parse<T: FromStr>(&self, tok: &str) -> CliResult<T> {
        tok.parse().map_err(|_| self.err(format!("cannot parse `{tok}`")))
    }

    fn value<T: FromStr>(&mut self, key: &str) -> CliResult<T> {
        let t = self.one(key)?;
        self.parse(t)
    }

    fn string(&mut self, key: &str) -> CliResult<String> {
        let t = self.one(key)?;
        unescape(t).ok_or_else(|| self.err(format!("bad escape in `{t}`")))
    }

    /// A counted list: `key <n> v1 ... vn`.
    fn list<T: FromStr>(&mut self, key: &str) -> CliResult<Vec<T>> {
        let toks = self.next(key)?;
        self.counted(key, &toks)
    }

    fn counted<T: FromStr>(&self, key: &str, toks: &[&str]) -> CliResult<Vec<T>> {
        let (n, rest) = toks.split_first().ok_or_else(|| self.err(format!("`{key}` needs a count")))?;
        let n: usize = self.parse(n)?;
        if rest.len() != n {
            return Err(self.err(format!("`{key}` declares {n} values but has {}", rest.len())));
        }
        rest.iter().map(|t| self.parse(t)).collect()
    }

    fn rows(&mut self, key: &str) -> CliResult<Vec<Vec<f64>>> {
        let n: usize = self.value(key)?;
        (0..n).map(|_| self.list("row")).collect()
    }

    fn finish(&mut self) -> CliResult<()> {
        let rest = self.next("end")?;
        if !rest.is_empty() {
            return Err(self.err("`end` takes no values"));
        }
        if let Some((i, _)) = self.lines.next() {
            self.line_no = i + 1;
            return Err(self.err("content after `end`"));
        }
        Ok(())
    }
}

pub fn parse(text: &str) -> CliResult<StateObject> {
    let mut r = Reader::new(text);
    let version: u32 = r.value(MAGIC)?;
    if version != VERSION {
        return Err(r.err(format!("unsupported version {version}")));
    }
    let obj = match r.one("object")? {
        "encoder" => StateObject::Encoder(read_encoder(&mut r)?),
        "scaler" => {
            let scale = r.list("scale")?;
            let toks = r.next("mean")?;
            let mean = if toks == ["none"] { None } else { Some(r.counted("mean", &toks)?) };
            StateObject::Scaler(Scaler { scale, mean })
        }
        "ridge" => StateObject::Ridge(RidgeModel {
            weights: r.list("weights")?,
            intercept: r.value("intercept")?,
            chosen_lambda: r.value("chosen_lambda")?,
            lambda_grid: r.list("lambda_grid")?,
            cv_folds: r.value("cv_folds")?,
            cv_scores: r.list("cv_scores")?,
        }),
        "logistic" => {
            let toks = r.next("weights")?;
            if toks.len() < 2 {
                return Err(r.err("`weights` needs a shape"));
            }
            let (rows, cols): (usize, usize) = (r.parse(toks[0])?, r.parse(toks[1])?);
            let data = toks[2..].iter().map(|t| r.parse(t)).collect::<CliResult<Vec<f64>>>()?;
            let weights = FeatureMatrix::from_vec(rows, cols, data).map_err(|e| r.err(e))?;
            let intercepts = r.list("intercepts")?;
            let chosen_reg = r.value("chosen_reg")?;
            let class_weighting = match r.one("class_weighting")? {
                "none" => ClassWeighting::None,
                "inverse_frequency" => ClassWeighting::InverseFrequency,
                other => return Err(r.err(format!("unknown class weighting `{other}`"))),
            };
            StateObject::Logistic(LogisticModel {
                weights,
                intercepts,
                chosen_reg,
                class_weighting,
                cv_scores: r.list("cv_scores")?,
                loss_history: r.list("loss_history")?,
            })
        }
        other => return Err(r.err(format!("unknown object `{other}`"))),
    };
    r.finish()?;
    Ok(obj)
}

pub fn parse_encoder(text: &str) -> CliResult<FittedEncoder> {
    match parse(text)? {
        StateObject::Encoder(e) => Ok(e),
        other => Err(CliError::Data(format!("expected an encoder state file, found `{}`", other.kind()))),
    }
}

fn read_stats(r: &mut Reader) -> CliResult<TargetStats> {
    let toks = r.next("stats")?;
    let [task, shrinkage] = toks[..] else {
        return Err(r.err("`stats` takes a task and a shrinkage"));
    };
    let task: TaskKind = task.parse().map_err(|e| r.err(e))?;
    Ok(TargetStats {
        task,
        shrinkage: r.parse(shrinkage)?,
        prior: r.list("prior")?,
        conditional: r.rows("conditional")?,
        class_conditional: r.rows("class_conditional")?,
    })
}

fn read_encoder(r: &mut Reader) -> CliResult<FittedEncoder> {
    let spec: EncoderSpec = r.one("spec")?.parse().map_err(|e| r.err(e))?;
    let k: usize = r.value("domain")?;
    let mut categories = Vec::with_capacity(k);
    let mut frequencies = Vec::with_capacity(k);
    for _ in 0..k {
        let toks = r.next("category")?;
        let [c, f] = toks[..] else {
            return Err(r.err("`category` takes a string and a frequency"));
        };
        categories.push(unescape(c).ok_or_else(|| r.err(format!("bad escape in `{c}`")))?);
        frequencies.push(r.parse(f)?);
    }
    let domain = CategoryDomain::from_parts(categories, frequencies).map_err(|e| r.err(e))?;
    let kind = r.one("state")?;
    if kind != spec.kind_name() {
        return Err(r.err(format!("state `{kind}` does not match spec `{spec}`")));
    }
    let state = match spec {
        EncoderSpec::OneHot => EncoderState::OneHot,
        EncoderSpec::Hashing { .. } => EncoderState::Hashing,
        EncoderSpec::Similarity(_) => {
            let toks = r.next("prototypes")?;
            let prototypes = match toks[..] {
                ["none"] => None,
                [method, n] => {
                    let method = method.parse().map_err(|e| r.err(e))?;
                    let n: usize = r.parse(n)?;
                    let prototypes = (0..n).map(|_| r.string("prototype")).collect::<CliResult<_>>()?;
                    Some(PrototypeSet { prototypes, method })
                }
                _ => return Err(r.err("`prototypes` takes `none` or a method and a count")),
            };
            EncoderState::Similarity { prototypes }
        }
        EncoderSpec::Target { .. } => EncoderState::Target(read_stats(r)?),
        EncoderSpec::Mdv => EncoderState::Mdv(read_stats(r)?),
        EncoderSpec::BagOfNgrams { .. } => {
            let n: usize = r.value("vocab")?;
            EncoderState::BagOfNgrams {
                vocab: (0..n).map(|_| r.string("gram")).collect::<CliResult<_>>()?,
            }
        }
        EncoderSpec::ClusterOneHot { .. } => EncoderState::ClusterOneHot {
            n_clusters: r.value("clusters")?,
            assignment: r.list("assignment")?,
        },
    };
    let toks = r.next("projection")?;
    let projection = match toks[..] {
        ["none"] => None,
        ["identity", p] => Some(ProjectionMatrix::identity(r.parse(p)?)),
        ["gaussian", p, d, seed] => {
            Some(ProjectionMatrix::gaussian(r.parse(p)?, r.parse(d)?, r.parse(seed)?).map_err(|e| r.err(e))?)
        }
        _ => return Err(r.err("bad `projection` record")),
    };
    FittedEncoder::from_parts(spec, domain, state, projection).map_err(|e| r.err(e))
}

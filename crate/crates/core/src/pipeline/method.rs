use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::encoders::{EncoderSpec, FittedEncoder};
use crate::error::{Error, Result};
use crate::reduction::{self, ProjectionMatrix};
use crate::similarity::SimilarityMeasure;
use crate::target::Target;

/// Optional reduction of the dirty column's encoding to `d` dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    None,
    Projection(usize),
    MostFrequent(usize),
    KMeans(usize),
    DedupMerge(usize),
}

impl Reduction {
    pub fn name(&self) -> &'static str {
        match self {
            Reduction::None => "none",
            Reduction::Projection(_) => "projection",
            Reduction::MostFrequent(_) => "most_frequent",
            Reduction::KMeans(_) => "kmeans",
            Reduction::DedupMerge(_) => "dedup_merge",
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match *self {
            Reduction::None => None,
            Reduction::Projection(d) | Reduction::MostFrequent(d) | Reduction::KMeans(d) | Reduction::DedupMerge(d) => {
                Some(d)
            }
        }
    }

    /// Parses a reduction name and dimension as given on the command line.
    pub fn from_parts(name: &str, d: Option<usize>) -> Result<Self> {
        let need = || d.ok_or_else(|| Error::InvalidParameter(alloc::format!("reduction `{name}` needs a dimension")));
        let r = match name {
            "none" | "full" => Reduction::None,
            "projection" => Reduction::Projection(need()?),
            "most_frequent" => Reduction::MostFrequent(need()?),
            "kmeans" => Reduction::KMeans(need()?),
            "dedup_merge" => Reduction::DedupMerge(need()?),
            other => return Err(Error::InvalidParameter(alloc::format!("unknown reduction `{other}`"))),
        };
        if r.dim() == Some(0) {
            return Err(Error::InvalidParameter("reduction dimension must be >= 1".into()));
        }
        Ok(r)
    }
}

/// An encoder for the dirty column plus an optional reduction.
/// Written as `<encoder>` or `<encoder>@<reduction>:<d>`, e.g.
/// `similarity:ngram3@kmeans:100`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Method {
    pub encoder: EncoderSpec,
    pub reduction: Reduction,
}

impl Method {
    pub fn new(encoder: EncoderSpec, reduction: Reduction) -> Result<Self> {
        let m = Self { encoder, reduction };
        m.validate()?;
        Ok(m)
    }

    pub fn plain(encoder: EncoderSpec) -> Self {
        Self {
            encoder,
            reduction: Reduction::None,
        }
    }

    /// Similarity measure the prototype reductions work with: the encoder's
    /// own measure, or exact match for one-hot.
    fn prototype_measure(&self) -> Option<SimilarityMeasure> {
        match self.encoder {
            EncoderSpec::Similarity(m) => Some(m),
            EncoderSpec::OneHot => Some(SimilarityMeasure::ExactMatch),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.reduction {
            Reduction::None | Reduction::Projection(_) => Ok(()),
            Reduction::MostFrequent(_) | Reduction::KMeans(_) if self.prototype_measure().is_some() => Ok(()),
            Reduction::DedupMerge(_) if matches!(self.encoder, EncoderSpec::Similarity(_)) => Ok(()),
            r => Err(Error::InvalidParameter(alloc::format!(
                "reduction `{}` does not apply to encoder `{}`",
                r.name(),
                self.encoder
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encoder)?;
        if let Some(d) = self.reduction.dim() {
            write!(f, "@{}:{d}", self.reduction.name())?;
        }
        Ok(())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (enc, red) = match s.split_once('@') {
            Some((e, r)) => (e, Some(r)),
            None => (s, None),
        };
        let encoder: EncoderSpec = enc.trim().parse()?;
        let reduction = match red {
            None => Reduction::None,
            Some(r) => {
                let (name, d) = match r.split_once(':') {
                    Some((n, d)) => (
                        n,
                        Some(d.parse::<usize>().map_err(|_| {
                            Error::InvalidParameter(alloc::format!("bad reduction dimension in `{s}`"))
                        })?),
                    ),
                    None => (r, None),
                };
                Reduction::from_parts(name, d)?
            }
        };
        Method::new(encoder, reduction)
    }
}

/// Fits a method's encoder on a training column. Prototype and merge
/// reductions ask for at most `k` dimensions (the training cardinality);
/// larger requests are capped at `k`.
pub fn fit_method<S: AsRef<str>>(
    method: &Method,
    column: &[S],
    target: Option<&Target>,
    seed: u64,
) -> Result<FittedEncoder> {
    method.validate()?;
    let proto_fit = |m: SimilarityMeasure| FittedEncoder::fit_seeded(EncoderSpec::Similarity(m), column, target, seed);
    match method.reduction {
        Reduction::None => FittedEncoder::fit_seeded(method.encoder, column, target, seed),
        Reduction::Projection(d) => {
            let enc = FittedEncoder::fit_seeded(method.encoder, column, target, seed)?;
            let proj = ProjectionMatrix::gaussian(enc.base_dim(), d, seed)?;
            enc.with_projection(proj)
        }
        Reduction::MostFrequent(d) => {
            let m = method.prototype_measure().expect("validated");
            let enc = proto_fit(m)?;
            let protos = reduction::most_frequent_prototypes(enc.domain(), d.min(enc.domain().len()))?;
            enc.with_prototypes(protos)
        }
        Reduction::KMeans(d) => {
            let m = method.prototype_measure().expect("validated");
            let enc = proto_fit(m)?;
            let k = enc.domain().len();
            let protos = reduction::kmeans_prototypes(enc.domain(), &m, d.min(k), reduction::DEFAULT_SUBSAMPLE, seed)?;
            enc.with_prototypes(protos)
        }
        Reduction::DedupMerge(d) => {
            let EncoderSpec::Similarity(m) = method.encoder else {
                unreachable!("validated")
            };
            let domain = crate::encoders::CategoryDomain::from_column(column)?;
            let k = domain.len();
            reduction::dedup_merge_encoder(&domain, &m, d.min(k), seed)
        }
    }
}

/// Canonical label, e.g. `similarity:ngram3@kmeans:100`.
pub fn method_label(method: &Method) -> String {
    alloc::format!("{method}")
}

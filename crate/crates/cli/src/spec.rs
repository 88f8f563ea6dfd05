//! Norm and domain specifications in JSON.

use std::fs;

use anisoperim::geometry::LevelMode;
use anisoperim::norm::DEFAULT_MAX_APPROX_SEQUENCE;
use anisoperim::{AnisotropicNorm, ConvexDomain, Vec2};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{from_core, CliError};

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormSpec {
    Euclidean,
    Elliptic { a: f64, b: f64 },
    PNorm { p: f64 },
    PiecewisePq { p: f64, q: f64 },
    /// The max-norm through p-norm approximants.
    MaxApprox { p_sequence: Option<Vec<f64>> },
    /// The max-norm itself; only usable where a p-limit applies.
    Max,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Polar,
    Rotated,
    Sublevel,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    NormLevel { mode: ModeSpec, level: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Ellipse { a: f64, b: f64 },
    Disk { r: f64 },
    Square { r: f64 },
}

/// A parsed spec together with the JSON value it came from.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub spec: T,
    pub raw: Value,
}

/// Reads `arg` as inline JSON when it starts with `{`, else as a file path.
pub fn load<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<Loaded<T>, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Spec(format!("cannot read {what} spec '{arg}': {e}")))?
    };
    let raw: Value = serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("{what} spec is not valid JSON: {e}")))?;
    let spec = T::deserialize(&raw).map_err(|e| CliError::Spec(format!("invalid {what} spec: {e}")))?;
    Ok(Loaded { spec, raw })
}

impl NormSpec {
    pub fn build(&self) -> Result<AnisotropicNorm, CliError> {
        let norm = match self {
            NormSpec::Euclidean => Ok(AnisotropicNorm::euclidean()),
            NormSpec::Elliptic { a, b } => AnisotropicNorm::elliptic(*a, *b),
            NormSpec::PNorm { p } => AnisotropicNorm::p_norm(*p),
            NormSpec::PiecewisePq { p, q } => AnisotropicNorm::piecewise_pq(*p, *q),
            NormSpec::MaxApprox { p_sequence } => {
                AnisotropicNorm::max_approx(p_sequence.clone().unwrap_or_else(|| DEFAULT_MAX_APPROX_SEQUENCE.to_vec()))
            }
            NormSpec::Max => AnisotropicNorm::max_approx(DEFAULT_MAX_APPROX_SEQUENCE.to_vec()),
        };
        norm.map_err(from_core)
    }

    /// A smooth norm to draw Wulff shapes with: the norm itself, or the
    /// last approximant of an explicit `p_sequence`.
    pub fn drawable(&self) -> Result<AnisotropicNorm, CliError> {
        match self {
            NormSpec::Max | NormSpec::MaxApprox { p_sequence: None } => Err(CliError::Spec(
                "the max-norm has no smooth Wulff boundary; give a p_sequence".into(),
            )),
            NormSpec::MaxApprox { p_sequence: Some(seq) } => {
                let p = seq.iter().copied().fold(f64::NAN, f64::max);
                AnisotropicNorm::p_norm(p).map_err(from_core)
            }
            _ => self.build(),
        }
    }
}

impl DomainSpec {
    /// Builds the domain; `norm_level` domains use `norm`.
    pub fn build(&self, norm: &AnisotropicNorm) -> Result<ConvexDomain, CliError> {
        let domain = match self {
            DomainSpec::NormLevel { mode, level } => {
                let mode = match mode {
                    ModeSpec::Polar => LevelMode::Polar,
                    ModeSpec::Rotated => LevelMode::Rotated,
                    ModeSpec::Sublevel => LevelMode::Sublevel,
                };
                ConvexDomain::norm_level(norm, *level, mode)
            }
            DomainSpec::Polygon { vertices } => {
                ConvexDomain::polygon(vertices.iter().map(|v| Vec2::new(v[0], v[1])).collect())
            }
            DomainSpec::Ellipse { a, b } => ConvexDomain::ellipse(*a, *b),
            DomainSpec::Disk { r } => ConvexDomain::disk(*r),
            DomainSpec::Square { r } => ConvexDomain::square(*r),
        };
        domain.map_err(from_core)
    }
}

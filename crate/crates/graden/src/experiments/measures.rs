//! Parameterized measure descriptors shared by the experiment drivers, the
//! CLI and run manifests.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{self, DistrEn2dParams, SampEn2dParams};
use crate::error::{Error, Result};
use crate::graden::{self, Thresholds, DEFAULT_QUANTILE_A, DEFAULT_QUANTILE_B};
use crate::image::GrayImage;

/// A 2D entropy measure together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum MeasureSpec {
    /// Gradient entropy with quantile-level thresholds.
    Graden { a: f64, b: f64 },
    /// Gradient entropy with raw cut points, bypassing the quantile ranges.
    GradenRaw { delta: f64, gamma: f64 },
    Sampen2d { m: usize, r: f64 },
    Distren2d { m: usize, bins: usize },
    Peren2d,
}

impl MeasureSpec {
    pub fn graden_default() -> Self {
        Self::Graden {
            a: DEFAULT_QUANTILE_A,
            b: DEFAULT_QUANTILE_B,
        }
    }

    /// Applies the measure to an image.
    pub fn evaluate(&self, image: &GrayImage) -> Result<f64> {
        match *self {
            Self::Graden { a, b } => graden::graden(image, &Thresholds::from_quantiles(a, b)?),
            Self::GradenRaw { delta, gamma } => {
                graden::graden(image, &Thresholds::from_raw(delta, gamma)?)
            }
            Self::Sampen2d { m, r } => baselines::sampen2d(image, &SampEn2dParams { m, r }),
            Self::Distren2d { m, bins } => {
                baselines::distren2d(image, &DistrEn2dParams { m, bins })
            }
            Self::Peren2d => baselines::peren2d(image),
        }
    }

    /// Canonical label used in CSV columns and Table-style output.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Graden { a, b } => write!(f, "graden(a={a},b={b})"),
            Self::GradenRaw { delta, gamma } => write!(f, "graden(delta={delta},gamma={gamma})"),
            Self::Sampen2d { m, r } => write!(f, "sampen2d(m={m},r={r})"),
            Self::Distren2d { m, bins } => write!(f, "distren2d(m={m},bins={bins})"),
            Self::Peren2d => write!(f, "peren2d"),
        }
    }
}

impl FromStr for MeasureSpec {
    type Err = Error;

    /// Accepts `name` or `name(key=value, ...)`; omitted keys take their
    /// defaults. Examples: `graden`, `graden(a=0.6,b=0.85)`,
    /// `graden(delta=0.1,gamma=0.8)`, `sampen2d(m=1)`,
    /// `distren2d(m=2,bins=64)`, `peren2d`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                if !s.ends_with(')') {
                    return Err(Error::MeasureParse(format!("unbalanced parentheses in '{s}'")));
                }
                (&s[..open], parse_args(&s[open + 1..s.len() - 1])?)
            }
            None => (s, Vec::new()),
        };
        let get = |key: &str| -> Option<f64> {
            args.iter()
                .find(|(k, _)| k.eq_ignore_ascii_case(key))
                .map(|&(_, v)| v)
        };
        let known = |keys: &[&str]| -> Result<()> {
            for (k, _) in &args {
                if !keys.iter().any(|key| k.eq_ignore_ascii_case(key)) {
                    return Err(Error::MeasureParse(format!(
                        "unknown parameter '{k}' for measure '{name}'"
                    )));
                }
            }
            Ok(())
        };
        let as_usize = |key: &str, v: f64| -> Result<usize> {
            if v.fract() != 0.0 || v < 0.0 {
                return Err(Error::MeasureParse(format!("{key} must be a non-negative integer")));
            }
            Ok(v as usize)
        };
        match name.to_ascii_lowercase().as_str() {
            "graden" => {
                known(&["a", "b", "delta", "gamma"])?;
                let raw = get("delta").is_some() || get("gamma").is_some();
                if raw {
                    if get("a").is_some() || get("b").is_some() {
                        return Err(Error::MeasureParse(
                            "graden takes either (a, b) or (delta, gamma), not both".into(),
                        ));
                    }
                    let (Some(delta), Some(gamma)) = (get("delta"), get("gamma")) else {
                        return Err(Error::MeasureParse(
                            "graden raw thresholds need both delta and gamma".into(),
                        ));
                    };
                    Ok(Self::GradenRaw { delta, gamma })
                } else {
                    Ok(Self::Graden {
                        a: get("a").unwrap_or(DEFAULT_QUANTILE_A),
                        b: get("b").unwrap_or(DEFAULT_QUANTILE_B),
                    })
                }
            }
            "sampen2d" => {
                known(&["m", "r"])?;
                let defaults = SampEn2dParams::default();
                Ok(Self::Sampen2d {
                    m: get("m").map_or(Ok(defaults.m), |v| as_usize("m", v))?,
                    r: get("r").unwrap_or(defaults.r),
                })
            }
            "distren2d" => {
                // 'm' is the window side, capital 'M' the bin count: keys
                // are case-sensitive for this measure
                for (k, _) in &args {
                    if !["m", "M", "bins"].contains(&k.as_str()) {
                        return Err(Error::MeasureParse(format!(
                            "unknown parameter '{k}' for measure 'distren2d'"
                        )));
                    }
                }
                let exact = |key: &str| args.iter().find(|(k, _)| k == key).map(|&(_, v)| v);
                let defaults = DistrEn2dParams::default();
                let bins = exact("bins").or_else(|| exact("M"));
                Ok(Self::Distren2d {
                    m: exact("m").map_or(Ok(defaults.m), |v| as_usize("m", v))?,
                    bins: bins.map_or(Ok(defaults.bins), |v| as_usize("bins", v))?,
                })
            }
            "peren2d" => {
                known(&[])?;
                Ok(Self::Peren2d)
            }
            other => Err(Error::UnknownMeasure(other.to_string())),
        }
    }
}

fn parse_args(s: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::MeasureParse(format!("expected key=value, got '{part}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::MeasureParse(format!("non-numeric value in '{part}'")))?;
        out.push((key.trim().to_string(), value));
    }
    Ok(out)
}

/// Splits a comma-separated measure list, ignoring commas inside
/// parentheses, and parses each entry.
pub fn parse_measure_list(s: &str) -> Result<Vec<MeasureSpec>> {
    let mut specs = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| {
                    Error::MeasureParse(format!("unbalanced parentheses in '{s}'"))
                })?;
            }
            ',' if depth == 0 => {
                let piece = &s[start..i];
                if !piece.trim().is_empty() {
                    specs.push(piece.parse()?);
                }
                start = i + 1;
            }
            _ => {}
        }
    }
    let tail = &s[start..];
    if !tail.trim().is_empty() {
        specs.push(tail.parse()?);
    }
    if specs.is_empty() {
        return Err(Error::MeasureParse("empty measure list".into()));
    }
    Ok(specs)
}

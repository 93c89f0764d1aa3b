//! Gradient entropy of a grayscale image.
//!
//! The measure works on 2x2 pixel blocks. Each block contributes a triple of
//! directional gradients (horizontal, vertical, diagonal); all triples are
//! pooled and z-scored as one population, each component is quantized into the
//! five-symbol alphabet {-2, -1, 0, 1, 2} using two thresholds, and the
//! normalized Shannon entropy of the resulting 5^3 = 125 pattern histogram
//! is returned. Values lie in [0, 1]: 0 for a constant image, 1 when all
//! patterns are equally frequent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::normal;
use crate::stats;

/// Number of distinct symbol triples.
pub const PATTERN_COUNT: usize = 125;

/// Default quantile levels for the symbolization thresholds.
pub const DEFAULT_QUANTILE_A: f64 = 0.55;
pub const DEFAULT_QUANTILE_B: f64 = 0.8;

/// Symbolization cut points: `delta` bounds the dead band around zero,
/// `gamma` separates moderate from extreme gradients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    delta: f64,
    gamma: f64,
}

impl Thresholds {
    /// Thresholds from standard-normal quantile levels: `delta = inv_cdf(a)`,
    /// `gamma = inv_cdf(b)`, with `a` in (0.5, 0.75) and `b` in (0.75, 1).
    pub fn from_quantiles(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.5 && a < 0.75) {
            return Err(Error::ParamRange {
                name: "a",
                value: a,
                interval: "(0.5, 0.75)",
            });
        }
        if !(b > 0.75 && b < 1.0) {
            return Err(Error::ParamRange {
                name: "b",
                value: b,
                interval: "(0.75, 1)",
            });
        }
        Ok(Self {
            delta: normal::inv_cdf(a),
            gamma: normal::inv_cdf(b),
        })
    }

    /// Raw cut points, bypassing the quantile parametrization.
    /// Requires `0 <= delta < gamma`.
    pub fn from_raw(delta: f64, gamma: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::ParamRange {
                name: "delta",
                value: delta,
                interval: "[0, gamma)",
            });
        }
        if !gamma.is_finite() || gamma <= delta {
            return Err(Error::ParamRange {
                name: "gamma",
                value: gamma,
                interval: "(delta, inf)",
            });
        }
        Ok(Self { delta, gamma })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self::from_quantiles(DEFAULT_QUANTILE_A, DEFAULT_QUANTILE_B).expect("defaults in range")
    }
}

/// Per-block gradient triples of an image: `(H-1) x (W-1)` entries of
/// (horizontal, vertical, diagonal), stored interleaved row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    rows: usize,
    cols: usize,
    components: Vec<f64>,
    standardized: bool,
}

impl GradientField {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    /// All gradient components pooled, block-major (h, v, d per block).
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// Gradient triple of the block whose top-left pixel is (row, col).
    pub fn triple(&self, row: usize, col: usize) -> (f64, f64, f64) {
        let base = (row * self.cols + col) * 3;
        (
            self.components[base],
            self.components[base + 1],
            self.components[base + 2],
        )
    }
}

/// Raw directional gradients of every 2x2 block.
///
/// For the block at (i, j): horizontal `x[i][j+1] - x[i][j]`, vertical
/// `x[i+1][j] - x[i][j]`, diagonal `x[i+1][j+1] - x[i][j]`.
pub fn compute_gradients(image: &GrayImage) -> Result<GradientField> {
    let (h, w) = (image.height(), image.width());
    if h < 2 || w < 2 {
        return Err(Error::ImageTooSmall {
            height: h,
            width: w,
            min_height: 2,
            min_width: 2,
        });
    }
    let (rows, cols) = (h - 1, w - 1);
    let mut components = Vec::with_capacity(rows * cols * 3);
    for i in 0..rows {
        let cur = image.row(i);
        let below = image.row(i + 1);
        for j in 0..cols {
            let base = cur[j];
            components.push(cur[j + 1] - base);
            components.push(below[j] - base);
            components.push(below[j + 1] - base);
        }
    }
    Ok(GradientField {
        rows,
        cols,
        components,
        standardized: false,
    })
}

/// Z-scores all components as a single pooled population, using the
/// population standard deviation. A zero-spread field (constant image)
/// standardizes to all zeros.
pub fn standardize(mut field: GradientField) -> GradientField {
    assert!(!field.standardized, "gradient field already standardized");
    let mu = stats::mean(&field.components);
    let sd = stats::population_std(&field.components);
    if sd == 0.0 {
        field.components.iter_mut().for_each(|v| *v = 0.0);
    } else {
        field.components.iter_mut().for_each(|v| *v = (*v - mu) / sd);
    }
    field.standardized = true;
    field
}

/// Maps a standardized gradient onto the five-symbol alphabet.
///
/// Bands are left-open, right-closed:
/// `(-inf, -gamma] -> -2`, `(-gamma, -delta] -> -1`, `(-delta, delta] -> 0`,
/// `(delta, gamma] -> 1`, `(gamma, inf) -> 2`.
#[inline]
pub fn symbolize(value: f64, t: &Thresholds) -> i8 {
    if value <= -t.gamma {
        -2
    } else if value <= -t.delta {
        -1
    } else if value <= t.delta {
        0
    } else if value <= t.gamma {
        1
    } else {
        2
    }
}

/// Fixed bijection from a symbol triple onto [0, 124].
#[inline]
pub fn pattern_index(s_h: i8, s_v: i8, s_d: i8) -> usize {
    (s_h + 2) as usize * 25 + (s_v + 2) as usize * 5 + (s_d + 2) as usize
}

/// Counts over the 125 symbol patterns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl PatternHistogram {
    /// Builds directly from counts; used by tests and synthetic inputs.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.len() != PATTERN_COUNT {
            return Err(Error::DataLength {
                expected: PATTERN_COUNT,
                got: counts.len(),
                context: "pattern histogram",
            });
        }
        let total = counts.iter().sum();
        Ok(Self { counts, total })
    }

    /// Counts in pattern-index order (see [`pattern_index`]).
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Symbolizes a standardized field and tallies the 125-bin histogram.
pub fn pattern_histogram(field: &GradientField, t: &Thresholds) -> PatternHistogram {
    assert!(field.standardized, "gradient field must be standardized first");
    let mut counts = vec![0u64; PATTERN_COUNT];
    for triple in field.components.chunks_exact(3) {
        let idx = pattern_index(
            symbolize(triple[0], t),
            symbolize(triple[1], t),
            symbolize(triple[2], t),
        );
        counts[idx] += 1;
    }
    PatternHistogram {
        counts,
        total: (field.rows * field.cols) as u64,
    }
}

/// Normalized Shannon entropy of a pattern histogram, in [0, 1].
pub fn entropy_from_histogram(histogram: &PatternHistogram) -> f64 {
    stats::normalized_entropy(&histogram.counts, PATTERN_COUNT)
}

/// Gradient entropy of an image with the given thresholds.
pub fn graden(image: &GrayImage, t: &Thresholds) -> Result<f64> {
    graden_with_histogram(image, t).map(|(value, _)| value)
}

/// Gradient entropy together with the pattern histogram it was computed from.
pub fn graden_with_histogram(image: &GrayImage, t: &Thresholds) -> Result<(f64, PatternHistogram)> {
    let field = standardize(compute_gradients(image)?);
    let histogram = pattern_histogram(&field, t);
    Ok((entropy_from_histogram(&histogram), histogram))
}

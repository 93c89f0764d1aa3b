//! Scripted simulation studies and benchmark drivers.
//!
//! Every experiment is a pure function of a config struct plus a 64-bit
//! master seed. Per-sample seeds derive from the master through
//! [`generators::derive_seed`], so parallel execution over samples cannot
//! change results; reruns with the same manifest reproduce output
//! byte-for-byte. Benchmark timing is the one exception: its configuration
//! is reproducible, its wall times naturally are not.
//!
//! CSV output follows one-row-per-observation with a header and stable
//! column order; the benchmark instead mirrors the measure-by-size table
//! layout of the computation-cost comparison.

mod manifest;
mod measures;

pub use manifest::RunManifest;
pub use measures::{parse_measure_list, MeasureSpec};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use std::path::Path;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::generators::{self, derive_seed, seeded_rng};
use crate::image::GrayImage;
use crate::io;
use crate::stats::{self, GroupSummary};
use crate::transforms;

// Seed-derivation tags, one per experiment family.
const TAG_SWEEP: u64 = 1;
const TAG_NOISE_CLASS: u64 = 2;
const TAG_ROBUSTNESS: u64 = 3;
const TAG_MIX: u64 = 4;
const TAG_BENCH: u64 = 6;

/// Noise families of the colored-noise study, with their spectral exponents.
pub const NOISE_TYPES: [(&str, f64); 4] =
    [("white", 0.0), ("pink", 1.0), ("blue", -1.0), ("red", 2.0)];

fn grid_points(min: f64, max: f64, step: f64, name: &'static str) -> Result<Vec<f64>> {
    // the negated form also rejects NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(step > 0.0) {
        return Err(Error::ParamRange {
            name: "step",
            value: step,
            interval: "(0, inf)",
        });
    }
    if max < min {
        return Err(Error::ParamRange {
            name,
            value: max,
            interval: "[min, inf)",
        });
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

// ---------------------------------------------------------------------------
// threshold sweep
// ---------------------------------------------------------------------------

/// Grid sweep of the gradient-entropy quantile thresholds on one seeded
/// noise image.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub height: usize,
    pub width: usize,
    /// Spectral exponent of the noise image the sweep runs on.
    pub beta: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub step: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            height: 100,
            width: 100,
            beta: 0.0,
            a_min: 0.51,
            a_max: 0.74,
            b_min: 0.76,
            b_max: 0.95,
            step: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> Result<String> {
        csv_string(
            &["experiment", "measure", "a", "b", "value"],
            self.rows
                .iter()
                .map(|r| {
                    vec![
                        "sweep".into(),
                        "graden".into(),
                        fmt(r.a),
                        fmt(r.b),
                        fmt(r.value),
                    ]
                })
                .collect(),
        )
    }
}

pub fn sweep_thresholds(cfg: &SweepConfig, seed: u64) -> Result<SweepResult> {
    let a_values = grid_points(cfg.a_min, cfg.a_max, cfg.step, "a_max")?;
    let b_values = grid_points(cfg.b_min, cfg.b_max, cfg.step, "b_max")?;
    let image = generators::noise_image(
        cfg.height,
        cfg.width,
        cfg.beta,
        derive_seed(seed, &[TAG_SWEEP]),
    )?;

    let grid: Vec<(f64, f64)> = a_values
        .iter()
        .flat_map(|&a| b_values.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<Result<SweepRow>> = grid
        .par_iter()
        .map(|&(a, b)| {
            MeasureSpec::Graden { a, b }
                .evaluate(&image)
                .map(|value| SweepRow { a, b, value })
        })
        .collect();
    Ok(SweepResult {
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

// ---------------------------------------------------------------------------
// colored-noise classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseClassConfig {
    pub n_samples: usize,
    pub height: usize,
    pub width: usize,
    pub measures: Vec<MeasureSpec>,
}

impl Default for NoiseClassConfig {
    fn default() -> Self {
        Self {
            n_samples: 50,
            height: 100,
            width: 100,
            measures: vec![
                MeasureSpec::Distren2d { m: 2, bins: 128 },
                MeasureSpec::graden_default(),
            ],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseObservation {
    pub measure: String,
    pub noise: String,
    pub sample: usize,
    pub value: f64,
}

/// Per-(measure, group) five-number summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupRow {
    pub measure: String,
    pub group: String,
    pub summary: GroupSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseClassResult {
    pub observations: Vec<NoiseObservation>,
    pub summaries: Vec<GroupRow>,
}

impl NoiseClassResult {
    pub fn to_csv(&self) -> Result<String> {
        csv_string(
            &["experiment", "measure", "noise", "sample", "value"],
            self.observations
                .iter()
                .map(|r| {
                    vec![
                        "noise-class".into(),
                        r.measure.clone(),
                        r.noise.clone(),
                        r.sample.to_string(),
                        fmt(r.value),
                    ]
                })
                .collect(),
        )
    }

    /// Observed values for one measure and noise family.
    pub fn group_values(&self, measure: &MeasureSpec, noise: &str) -> Vec<f64> {
        let label = measure.label();
        self.observations
            .iter()
            .filter(|o| o.measure == label && o.noise == noise)
            .map(|o| o.value)
            .collect()
    }
}

pub fn run_noise_classification(cfg: &NoiseClassConfig, seed: u64) -> Result<NoiseClassResult> {
    if cfg.n_samples < 2 {
        return Err(Error::InsufficientData {
            n: cfg.n_samples,
            needed: 2,
        });
    }
    let jobs: Vec<(usize, usize)> = (0..NOISE_TYPES.len())
        .flat_map(|g| (0..cfg.n_samples).map(move |s| (g, s)))
        .collect();
    let per_image: Vec<Result<Vec<f64>>> = jobs
        .par_iter()
        .map(|&(group, sample)| {
            let (_, beta) = NOISE_TYPES[group];
            let image = generators::noise_image(
                cfg.height,
                cfg.width,
                beta,
                derive_seed(seed, &[TAG_NOISE_CLASS, group as u64, sample as u64]),
            )?;
            cfg.measures.iter().map(|m| m.evaluate(&image)).collect()
        })
        .collect();

    let mut observations = Vec::new();
    for (&(group, sample), values) in jobs.iter().zip(per_image) {
        let values = values?;
        for (measure, value) in cfg.measures.iter().zip(values) {
            observations.push(NoiseObservation {
                measure: measure.label(),
                noise: NOISE_TYPES[group].0.to_string(),
                sample,
                value,
            });
        }
    }

    let mut summaries = Vec::new();
    for measure in &cfg.measures {
        for (noise, _) in NOISE_TYPES {
            let values: Vec<f64> = observations
                .iter()
                .filter(|o| o.measure == measure.label() && o.noise == noise)
                .map(|o| o.value)
                .collect();
            summaries.push(GroupRow {
                measure: measure.label(),
                group: noise.to_string(),
                summary: stats::group_summary(&values)?,
            });
        }
    }
    Ok(NoiseClassResult {
        observations,
        summaries,
    })
}

// ---------------------------------------------------------------------------
// robustness across image sizes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobustnessConfig {
    pub sizes: Vec<usize>,
    pub n_samples: usize,
    /// Spectral exponent of the noise family under test.
    pub beta: f64,
    pub measures: Vec<MeasureSpec>,
}

impl Default for RobustnessConfig {
    fn default() -> Self {
        Self {
            sizes: vec![20, 40, 60, 80, 100],
            n_samples: 30,
            beta: 0.0,
            measures: vec![
                MeasureSpec::Sampen2d { m: 1, r: 0.2 },
                MeasureSpec::Distren2d { m: 2, bins: 128 },
                MeasureSpec::graden_default(),
            ],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobustnessRow {
    pub measure: String,
    pub size: usize,
    pub cv: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobustnessResult {
    pub rows: Vec<RobustnessRow>,
}

impl RobustnessResult {
    pub fn to_csv(&self) -> Result<String> {
        csv_string(
            &["experiment", "measure", "size", "cv"],
            self.rows
                .iter()
                .map(|r| {
                    vec![
                        "robustness".into(),
                        r.measure.clone(),
                        r.size.to_string(),
                        fmt(r.cv),
                    ]
                })
                .collect(),
        )
    }

    pub fn cv(&self, measure: &MeasureSpec, size: usize) -> Option<f64> {
        let label = measure.label();
        self.rows
            .iter()
            .find(|r| r.measure == label && r.size == size)
            .map(|r| r.cv)
    }
}

pub fn run_robustness(cfg: &RobustnessConfig, seed: u64) -> Result<RobustnessResult> {
    if cfg.n_samples < 2 {
        return Err(Error::InsufficientData {
            n: cfg.n_samples,
            needed: 2,
        });
    }
    let mut rows = Vec::new();
    for (size_idx, &size) in cfg.sizes.iter().enumerate() {
        let per_sample: Vec<Result<Vec<f64>>> = (0..cfg.n_samples)
            .into_par_iter()
            .map(|sample| {
                let image = generators::noise_image(
                    size,
                    size,
                    cfg.beta,
                    derive_seed(seed, &[TAG_ROBUSTNESS, size_idx as u64, sample as u64]),
                )?;
                cfg.measures.iter().map(|m| m.evaluate(&image)).collect()
            })
            .collect();
        let per_sample: Vec<Vec<f64>> = per_sample.into_iter().collect::<Result<_>>()?;
        for (m_idx, measure) in cfg.measures.iter().enumerate() {
            let values: Vec<f64> = per_sample.iter().map(|v| v[m_idx]).collect();
            rows.push(RobustnessRow {
                measure: measure.label(),
                size,
                cv: stats::coefficient_of_variation(&values)?,
            });
        }
    }
    Ok(RobustnessResult { rows })
}

// ---------------------------------------------------------------------------
// robustness of the mixed process under added noise
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixRobustnessConfig {
    pub p_values: Vec<f64>,
    /// Variances of the added white Gaussian noise.
    pub variances: Vec<f64>,
    /// Samples per (p, variance) cell; the CV pools all variances of a p.
    pub n_samples: usize,
    pub height: usize,
    pub width: usize,
    pub measures: Vec<MeasureSpec>,
}

impl Default for MixRobustnessConfig {
    fn default() -> Self {
        Self {
            p_values: vec![0.2, 0.5, 0.8],
            variances: vec![0.01, 0.02, 0.03, 0.04, 0.05],
            n_samples: 6,
            height: 100,
            width: 100,
            measures: vec![
                MeasureSpec::Sampen2d { m: 1, r: 0.2 },
                MeasureSpec::Distren2d { m: 2, bins: 128 },
                MeasureSpec::graden_default(),
            ],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixRobustnessRow {
    pub measure: String,
    pub p: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixRobustnessResult {
    pub rows: Vec<MixRobustnessRow>,
}

impl MixRobustnessResult {
    pub fn to_csv(&self) -> Result<String> {
        csv_string(
            &["experiment", "measure", "p", "cv"],
            self.rows
                .iter()
                .map(|r| {
                    vec![
                        "mix-robustness".into(),
                        r.measure.clone(),
                        fmt(r.p),
                        fmt(r.cv),
                    ]
                })
                .collect(),
        )
    }

    pub fn cv(&self, measure: &MeasureSpec, p: f64) -> Option<f64> {
        let label = measure.label();
        self.rows
            .iter()
            .find(|r| r.measure == label && (r.p - p).abs() < 1e-12)
            .map(|r| r.cv)
    }
}

/// Mixed-process image with added white Gaussian noise of the given variance.
fn noisy_mix_image(
    height: usize,
    width: usize,
    p: f64,
    variance: f64,
    mix_seed: u64,
    noise_seed: u64,
) -> Result<GrayImage> {
    use rand::Rng;
    use rand_distr::StandardNormal;

    let base = generators::mix2d(height, width, p, mix_seed)?;
    if variance == 0.0 {
        return Ok(base);
    }
    let sd = variance.sqrt();
    let mut rng = seeded_rng(noise_seed, 0);
    let data = base
        .data()
        .iter()
        .map(|v| v + sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    GrayImage::from_vec(height, width, data)
}

pub fn run_mix_noise_robustness(
    cfg: &MixRobustnessConfig,
    seed: u64,
) -> Result<MixRobustnessResult> {
    let total_per_p = cfg.variances.len() * cfg.n_samples;
    if total_per_p < 2 {
        return Err(Error::InsufficientData {
            n: total_per_p,
            needed: 2,
        });
    }
    let mut rows = Vec::new();
    for (p_idx, &p) in cfg.p_values.iter().enumerate() {
        let jobs: Vec<(usize, usize)> = (0..cfg.variances.len())
            .flat_map(|v| (0..cfg.n_samples).map(move |s| (v, s)))
            .collect();
        let per_image: Vec<Result<Vec<f64>>> = jobs
            .par_iter()
            .map(|&(var_idx, sample)| {
                let mix_seed =
                    derive_seed(seed, &[TAG_MIX, p_idx as u64, var_idx as u64, sample as u64]);
                let noise_seed = derive_seed(
                    seed,
                    &[TAG_MIX, 0xADD, p_idx as u64, var_idx as u64, sample as u64],
                );
                let image = noisy_mix_image(
                    cfg.height,
                    cfg.width,
                    p,
                    cfg.variances[var_idx],
                    mix_seed,
                    noise_seed,
                )?;
                cfg.measures.iter().map(|m| m.evaluate(&image)).collect()
            })
            .collect();
        let per_image: Vec<Vec<f64>> = per_image.into_iter().collect::<Result<_>>()?;
        for (m_idx, measure) in cfg.measures.iter().enumerate() {
            let values: Vec<f64> = per_image.iter().map(|v| v[m_idx]).collect();
            rows.push(MixRobustnessRow {
                measure: measure.label(),
                p,
                cv: stats::coefficient_of_variation(&values)?,
            });
        }
    }
    Ok(MixRobustnessResult { rows })
}

// ---------------------------------------------------------------------------
// logistic-map sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticConfig {
    pub a_min: f64,
    pub a_max: f64,
    pub step: f64,
    /// Series length fed into the distance matrix.
    pub n: usize,
    /// Embedding dimension of the distance matrix.
    pub embed: usize,
    pub x0: f64,
    pub burn_in: usize,
    pub measures: Vec<MeasureSpec>,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            a_min: 3.5,
            a_max: 4.0,
            step: 0.01,
            n: 150,
            embed: 3,
            x0: 0.3,
            burn_in: 0,
            measures: vec![
                MeasureSpec::Peren2d,
                MeasureSpec::Distren2d { m: 2, bins: 128 },
                MeasureSpec::graden_default(),
            ],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticRow {
    pub measure: String,
    pub a: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticResult {
    pub rows: Vec<LogisticRow>,
}

impl LogisticResult {
    pub fn to_csv(&self) -> Result<String> {
        csv_string(
            &["experiment", "measure", "a", "value"],
            self.rows
                .iter()
                .map(|r| {
                    vec![
                        "logistic".into(),
                        r.measure.clone(),
                        fmt(r.a),
                        fmt(r.value),
                    ]
                })
                .collect(),
        )
    }

    pub fn series(&self, measure: &MeasureSpec) -> Vec<(f64, f64)> {
        let label = measure.label();
        self.rows
            .iter()
            .filter(|r| r.measure == label)
            .map(|r| (r.a, r.value))
            .collect()
    }
}

/// Entropy of the phase-space distance matrix of logistic-map series, for
/// each control parameter on the grid. Deterministic: no randomness enters.
pub fn run_logistic_sweep(cfg: &LogisticConfig) -> Result<LogisticResult> {
    let a_values = grid_points(cfg.a_min, cfg.a_max, cfg.step, "a_max")?;
    let per_a: Vec<Result<Vec<f64>>> = a_values
        .par_iter()
        .map(|&a| {
            let series = generators::logistic_series(a, cfg.x0, cfg.n, cfg.burn_in)?;
            let matrix = transforms::distance_matrix(&series, cfg.embed)?;
            cfg.measures.iter().map(|m| m.evaluate(&matrix)).collect()
        })
        .collect();
    let mut rows = Vec::new();
    for (&a, values) in a_values.iter().zip(per_a) {
        let values = values?;
        for (measure, value) in cfg.measures.iter().zip(values) {
            rows.push(LogisticRow {
                measure: measure.label(),
                a,
                value,
            });
        }
    }
    Ok(LogisticResult { rows })
}

// ---------------------------------------------------------------------------
// computation-cost benchmark
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub measures: Vec<MeasureSpec>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![40, 80, 120, 160],
            repeats: 5,
            measures: vec![
                MeasureSpec::Sampen2d { m: 1, r: 0.2 },
                MeasureSpec::Sampen2d { m: 2, r: 0.2 },
                MeasureSpec::Sampen2d { m: 3, r: 0.2 },
                MeasureSpec::Distren2d { m: 1, bins: 128 },
                MeasureSpec::Distren2d { m: 2, bins: 128 },
                MeasureSpec::Distren2d { m: 3, bins: 128 },
                MeasureSpec::graden_default(),
            ],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchCell {
    pub measure: String,
    pub size: usize,
    pub median_secs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchResult {
    pub sizes: Vec<usize>,
    pub cells: Vec<BenchCell>,
}

impl BenchResult {
    /// Wide table: one row per measure, one column per image size.
    pub fn to_csv(&self) -> Result<String> {
        let mut header: Vec<String> = vec!["measure".into()];
        header.extend(self.sizes.iter().map(|s| format!("{s}x{s}")));
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();

        let mut measures: Vec<&str> = Vec::new();
        for cell in &self.cells {
            if !measures.contains(&cell.measure.as_str()) {
                measures.push(&cell.measure);
            }
        }
        let rows = measures
            .iter()
            .map(|m| {
                let mut row = vec![(*m).to_string()];
                for &size in &self.sizes {
                    let cell = self
                        .cells
                        .iter()
                        .find(|c| c.measure == *m && c.size == size);
                    row.push(cell.map_or_else(String::new, |c| fmt(c.median_secs)));
                }
                row
            })
            .collect();
        csv_string(&header_refs, rows)
    }

    pub fn median_secs(&self, measure: &MeasureSpec, size: usize) -> Option<f64> {
        let label = measure.label();
        self.cells
            .iter()
            .find(|c| c.measure == label && c.size == size)
            .map(|c| c.median_secs)
    }
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median wall time per (measure, size) over `repeats` evaluations of one
/// seeded white-noise image. Runs strictly serially so timings stay
/// comparable.
pub fn run_benchmark(cfg: &BenchConfig, seed: u64) -> Result<BenchResult> {
    if cfg.repeats < 1 {
        return Err(Error::ParamRange {
            name: "repeats",
            value: cfg.repeats as f64,
            interval: "[1, inf)",
        });
    }
    let mut cells = Vec::new();
    for (size_idx, &size) in cfg.sizes.iter().enumerate() {
        let image = generators::noise_image(
            size,
            size,
            0.0,
            derive_seed(seed, &[TAG_BENCH, size_idx as u64]),
        )?;
        for measure in &cfg.measures {
            measure.evaluate(&image)?; // warmup, also surfaces errors early
            let mut times = Vec::with_capacity(cfg.repeats);
            for _ in 0..cfg.repeats {
                let start = Instant::now();
                let value = measure.evaluate(&image)?;
                let elapsed = start.elapsed().as_secs_f64();
                std::hint::black_box(value);
                times.push(elapsed);
            }
            cells.push(BenchCell {
                measure: measure.label(),
                size,
                median_secs: median(times),
            });
        }
    }
    Ok(BenchResult {
        sizes: cfg.sizes.clone(),
        cells,
    })
}

// ---------------------------------------------------------------------------
// dataset classification pipelines
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Pipeline {
    /// Grayscale images downsampled to a fixed size, then measured.
    Image {
        target_height: usize,
        target_width: usize,
    },
    /// Signals cut into sliding windows; each window becomes a distance
    /// matrix and one observation.
    SignalWindows {
        window: usize,
        step: usize,
        embed: usize,
    },
    /// The leading `length` points of each signal become one observation.
    SignalPrefix { length: usize, embed: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub dataset: String,
    pub pipeline: Pipeline,
    pub measure: MeasureSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRow {
    pub label: String,
    pub source: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectRow {
    pub label_a: String,
    pub label_b: String,
    pub g: f64,
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub measure: String,
    pub samples: Vec<SampleRow>,
    pub summaries: Vec<GroupRow>,
    pub effects: Vec<EffectRow>,
    /// Per-file problems that were skipped, as display strings.
    pub failures: Vec<String>,
}

impl ClassificationResult {
    pub fn to_csv(&self) -> Result<String> {
        csv_string(
            &["experiment", "measure", "label", "source", "value"],
            self.samples
                .iter()
                .map(|r| {
                    vec![
                        "classify".into(),
                        self.measure.clone(),
                        r.label.clone(),
                        r.source.clone(),
                        fmt(r.value),
                    ]
                })
                .collect(),
        )
    }
}

/// Per-class summaries and all pairwise effect sizes for labeled values.
/// Labels are processed in sorted order; a single class yields no effect
/// sizes.
pub fn classification_report(
    measure_label: &str,
    groups: &[(String, Vec<f64>)],
) -> Result<(Vec<GroupRow>, Vec<EffectRow>)> {
    let mut labels: Vec<&String> = groups.iter().map(|(l, _)| l).collect();
    labels.sort();
    labels.dedup();

    let values_of = |label: &str| -> Vec<f64> {
        groups
            .iter()
            .filter(|(l, _)| l == label)
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    };

    let mut summaries = Vec::new();
    for label in &labels {
        summaries.push(GroupRow {
            measure: measure_label.to_string(),
            group: (*label).clone(),
            summary: stats::group_summary(&values_of(label))?,
        });
    }
    let mut effects = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            let e = stats::hedges_g(&values_of(a), &values_of(b))?;
            effects.push(EffectRow {
                label_a: (*a).clone(),
                label_b: (*b).clone(),
                g: e.g,
                n1: e.n1,
                n2: e.n2,
            });
        }
    }
    Ok((summaries, effects))
}

fn failure_string(f: &io::LoadFailure) -> String {
    format!("{}: {}", f.source.display(), f.error)
}

pub fn run_classification(cfg: &ClassifyConfig) -> Result<ClassificationResult> {
    let root = Path::new(&cfg.dataset);
    let mut samples: Vec<SampleRow> = Vec::new();
    let mut failures: Vec<String> = Vec::new();

    match cfg.pipeline {
        Pipeline::Image {
            target_height,
            target_width,
        } => {
            let dataset = io::load_dataset(root)?;
            failures.extend(dataset.failures.iter().map(failure_string));
            let results: Vec<(String, String, Result<f64>)> = dataset
                .samples
                .par_iter()
                .map(|s| {
                    let value = transforms::downsample(&s.image, target_height, target_width)
                        .and_then(|img| cfg.measure.evaluate(&img));
                    (s.label.clone(), s.source.display().to_string(), value)
                })
                .collect();
            for (label, source, value) in results {
                match value {
                    Ok(value) => samples.push(SampleRow {
                        label,
                        source,
                        value,
                    }),
                    Err(e) => failures.push(format!("{source}: {e}")),
                }
            }
        }
        Pipeline::SignalWindows {
            window,
            step,
            embed,
        } => {
            let (signals, walk_failures) = io::load_signal_dataset(root)?;
            failures.extend(walk_failures.iter().map(failure_string));
            let results: Vec<Result<Vec<SampleRow>>> = signals
                .par_iter()
                .map(|s| {
                    let windows = transforms::sliding_windows(&s.values, window, step)?;
                    windows
                        .iter()
                        .enumerate()
                        .map(|(k, w)| {
                            let matrix = transforms::distance_matrix(w, embed)?;
                            Ok(SampleRow {
                                label: s.label.clone(),
                                source: format!("{}#{k}", s.source.display()),
                                value: cfg.measure.evaluate(&matrix)?,
                            })
                        })
                        .collect()
                })
                .collect();
            for (signal, result) in signals.iter().zip(results) {
                match result {
                    Ok(rows) => samples.extend(rows),
                    Err(e) => failures.push(format!("{}: {e}", signal.source.display())),
                }
            }
        }
        Pipeline::SignalPrefix { length, embed } => {
            let (signals, walk_failures) = io::load_signal_dataset(root)?;
            failures.extend(walk_failures.iter().map(failure_string));
            let results: Vec<(String, String, Result<f64>)> = signals
                .par_iter()
                .map(|s| {
                    let value = if s.values.len() < length {
                        Err(Error::SeriesTooShort {
                            len: s.values.len(),
                            needed: length,
                        })
                    } else {
                        transforms::distance_matrix(&s.values[..length], embed)
                            .and_then(|matrix| cfg.measure.evaluate(&matrix))
                    };
                    (s.label.clone(), s.source.display().to_string(), value)
                })
                .collect();
            for (label, source, value) in results {
                match value {
                    Ok(value) => samples.push(SampleRow {
                        label,
                        source,
                        value,
                    }),
                    Err(e) => failures.push(format!("{source}: {e}")),
                }
            }
        }
    }

    if samples.is_empty() {
        return Err(Error::EmptyDataset(root.to_path_buf()));
    }
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for row in &samples {
        match groups.iter_mut().find(|(l, _)| *l == row.label) {
            Some((_, values)) => values.push(row.value),
            None => groups.push((row.label.clone(), vec![row.value])),
        }
    }
    let measure_label = cfg.measure.label();
    let (summaries, effects) = classification_report(&measure_label, &groups)?;
    Ok(ClassificationResult {
        measure: measure_label,
        samples,
        summaries,
        effects,
        failures,
    })
}

// ---------------------------------------------------------------------------
// manifest-driven rerun
// ---------------------------------------------------------------------------

/// CSV and JSON renderings of one experiment run.
pub struct RunOutput {
    pub csv: String,
    pub json: String,
}

fn output(result: &(impl Serialize + CsvRender)) -> Result<RunOutput> {
    Ok(RunOutput {
        csv: result.to_csv()?,
        json: serde_json::to_string_pretty(result)?,
    })
}

trait CsvRender {
    fn to_csv(&self) -> Result<String>;
}

macro_rules! impl_csv_render {
    ($($t:ty),*) => {$(
        impl CsvRender for $t {
            fn to_csv(&self) -> Result<String> {
                <$t>::to_csv(self)
            }
        }
    )*};
}

impl_csv_render!(
    SweepResult,
    NoiseClassResult,
    RobustnessResult,
    MixRobustnessResult,
    LogisticResult,
    BenchResult,
    ClassificationResult
);

/// Re-executes the experiment recorded in a manifest. Aside from benchmark
/// timings, the output is byte-identical to the original run.
pub fn rerun(manifest: &RunManifest) -> Result<RunOutput> {
    let params = manifest.params.clone();
    match manifest.experiment.as_str() {
        "sweep" => output(&sweep_thresholds(
            &serde_json::from_value(params)?,
            manifest.seed,
        )?),
        "noise-class" => output(&run_noise_classification(
            &serde_json::from_value(params)?,
            manifest.seed,
        )?),
        "robustness" => output(&run_robustness(
            &serde_json::from_value(params)?,
            manifest.seed,
        )?),
        "mix-robustness" => output(&run_mix_noise_robustness(
            &serde_json::from_value(params)?,
            manifest.seed,
        )?),
        "logistic" => output(&run_logistic_sweep(&serde_json::from_value(params)?)?),
        "bench" => output(&run_benchmark(
            &serde_json::from_value(params)?,
            manifest.seed,
        )?),
        "classify" => output(&run_classification(&serde_json::from_value(params)?)?),
        other => Err(Error::InvalidManifest(format!(
            "unknown experiment '{other}'"
        ))),
    }
}

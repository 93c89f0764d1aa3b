//! Error type shared by every module of the crate.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("image is {height}x{width}; at least {min_height}x{min_width} required")]
    ImageTooSmall {
        height: usize,
        width: usize,
        min_height: usize,
        min_width: usize,
    },

    #[error("input contains a non-finite value")]
    NonFinite,

    #[error("parameter {name} = {value} outside {interval}")]
    ParamRange {
        name: &'static str,
        value: f64,
        interval: &'static str,
    },

    #[error("{context}: expected {expected} values, got {got}")]
    DataLength {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("series of length {len} too short; at least {needed} values required")]
    SeriesTooShort { len: usize, needed: usize },

    #[error("window length {window} exceeds series length {len}")]
    WindowTooLarge { window: usize, len: usize },

    #[error("cannot downsample {src_h}x{src_w} to larger {dst_h}x{dst_w}")]
    UpsampleRequested {
        src_h: usize,
        src_w: usize,
        dst_h: usize,
        dst_w: usize,
    },

    #[error("coefficient of variation undefined for zero-mean data")]
    ZeroMean,

    #[error("need at least {needed} values, got {n}")]
    InsufficientData { n: usize, needed: usize },

    #[error("pooled variance is zero; effect size undefined")]
    DegeneratePooledVariance,

    #[error("correlation undefined for constant input")]
    ConstantInput,

    #[error("sample entropy undefined: {matches_m} m-window matches, {matches_m1} (m+1)-window matches")]
    UndefinedEntropy { matches_m: u64, matches_m1: u64 },

    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("unsupported image format: {}", .0.display())]
    UnsupportedFormat(PathBuf),

    #[error("corrupt file {}: {detail}", .path.display())]
    CorruptFile { path: PathBuf, detail: String },

    #[error("{}:{line}: cannot parse '{token}' as a finite number", .path.display())]
    SignalParse {
        path: PathBuf,
        line: usize,
        token: String,
    },

    #[error("no class subdirectories with readable images under {}", .0.display())]
    EmptyDataset(PathBuf),

    #[error("invalid manifest: {0}")]
    InvalidManifest(String),

    #[error("unknown measure '{0}'")]
    UnknownMeasure(String),

    #[error("cannot parse measure spec: {0}")]
    MeasureParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

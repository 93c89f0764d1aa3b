//! Gradient entropy (GradEn) and companion 2D entropy measures.
//!
//! The crate quantifies the irregularity of grayscale images and, via
//! distance-matrix transforms, of 1D signals. It bundles:
//!
//! - [`graden`]: the gradient entropy measure itself;
//! - [`baselines`]: 2D sample, distribution and permutation entropy
//!   implemented per their original definitions;
//! - [`generators`]: seeded colored noise, mixed processes and logistic-map
//!   series for simulation studies;
//! - [`transforms`]: phase-space distance matrices, sliding windows,
//!   grayscale conversion and downsampling;
//! - [`stats`]: coefficient of variation, Hedges' g, group summaries;
//! - [`io`]: raster/dataset/signal loading and atomic result persistence;
//! - [`experiments`]: reproducible, manifest-driven simulation and
//!   benchmark drivers behind the `graden` CLI.

pub mod baselines;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graden;
pub mod image;
pub mod io;
pub mod normal;
pub mod stats;
pub mod transforms;

pub use error::{Error, Result};
pub use graden::{graden, graden_with_histogram, PatternHistogram, Thresholds};
pub use image::{GrayImage, RgbImage};

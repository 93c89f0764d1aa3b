//! Dataset ingestion and result persistence.
//!
//! Images load from portable graymaps/pixmaps (ascii or binary) and PNG;
//! RGB inputs are converted to grayscale by the channel mean, intensities
//! land in [0, 255] as reals. Dataset directories follow the
//! one-subdirectory-per-class layout. All file outputs are written
//! atomically (temp file in the destination directory, then rename).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use image::DynamicImage;

use crate::error::{Error, Result};
use crate::image::{GrayImage, RgbImage};
use crate::transforms;

/// One image with its class label and origin.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub label: String,
    pub source: PathBuf,
    pub image: GrayImage,
}

/// A load failure that did not abort the dataset walk.
#[derive(Debug)]
pub struct LoadFailure {
    pub source: PathBuf,
    pub error: Error,
}

/// Result of walking a class-per-subdirectory dataset root.
#[derive(Debug)]
pub struct Dataset {
    pub samples: Vec<LabeledSample>,
    pub failures: Vec<LoadFailure>,
}

/// Extensions attempted by [`load_dataset`].
pub const IMAGE_EXTENSIONS: [&str; 4] = ["pgm", "ppm", "pnm", "png"];

/// Extensions attempted by [`load_signal_dataset`].
pub const SIGNAL_EXTENSIONS: [&str; 3] = ["txt", "csv", "dat"];

/// Loads a raster image as a grayscale intensity matrix.
///
/// Color inputs pass through the channel-mean grayscale conversion; 16-bit
/// and float samples are rescaled to the [0, 255] range.
pub fn load_image(path: &Path) -> Result<GrayImage> {
    if !path.exists() {
        return Err(Error::NotFound(path.to_path_buf()));
    }
    let decoded = image::ImageReader::open(path)
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
            _ => Error::Io(e),
        })?
        .decode()
        .map_err(|e| match e {
            image::ImageError::Unsupported(_) => Error::UnsupportedFormat(path.to_path_buf()),
            other => Error::CorruptFile {
                path: path.to_path_buf(),
                detail: other.to_string(),
            },
        })?;
    dynamic_to_gray(path, decoded)
}

fn dynamic_to_gray(path: &Path, img: DynamicImage) -> Result<GrayImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    const U16_SCALE: f64 = 255.0 / 65535.0;
    match img {
        DynamicImage::ImageLuma8(buf) => {
            GrayImage::from_vec(h, w, buf.into_raw().iter().map(|&v| f64::from(v)).collect())
        }
        DynamicImage::ImageLumaA8(buf) => GrayImage::from_vec(
            h,
            w,
            buf.into_raw().chunks_exact(2).map(|p| f64::from(p[0])).collect(),
        ),
        DynamicImage::ImageLuma16(buf) => GrayImage::from_vec(
            h,
            w,
            buf.into_raw().iter().map(|&v| f64::from(v) * U16_SCALE).collect(),
        ),
        DynamicImage::ImageLumaA16(buf) => GrayImage::from_vec(
            h,
            w,
            buf.into_raw()
                .chunks_exact(2)
                .map(|p| f64::from(p[0]) * U16_SCALE)
                .collect(),
        ),
        DynamicImage::ImageRgb8(buf) => {
            rgb_mean(h, w, buf.into_raw().iter().map(|&v| f64::from(v)).collect(), 3)
        }
        DynamicImage::ImageRgba8(buf) => {
            rgb_mean(h, w, buf.into_raw().iter().map(|&v| f64::from(v)).collect(), 4)
        }
        DynamicImage::ImageRgb16(buf) => rgb_mean(
            h,
            w,
            buf.into_raw().iter().map(|&v| f64::from(v) * U16_SCALE).collect(),
            3,
        ),
        DynamicImage::ImageRgba16(buf) => rgb_mean(
            h,
            w,
            buf.into_raw().iter().map(|&v| f64::from(v) * U16_SCALE).collect(),
            4,
        ),
        DynamicImage::ImageRgb32F(buf) => rgb_mean(
            h,
            w,
            buf.into_raw().iter().map(|&v| f64::from(v) * 255.0).collect(),
            3,
        ),
        DynamicImage::ImageRgba32F(buf) => rgb_mean(
            h,
            w,
            buf.into_raw().iter().map(|&v| f64::from(v) * 255.0).collect(),
            4,
        ),
        _ => Err(Error::UnsupportedFormat(path.to_path_buf())),
    }
}

/// Builds an [`RgbImage`] from interleaved samples (stride 3 or 4, alpha
/// dropped) and converts via the mean-of-channels rule.
fn rgb_mean(h: usize, w: usize, samples: Vec<f64>, stride: usize) -> Result<GrayImage> {
    let rgb: Vec<f64> = samples
        .chunks_exact(stride)
        .flat_map(|p| [p[0], p[1], p[2]])
        .collect();
    Ok(transforms::grayscale(&RgbImage::from_interleaved(h, w, rgb)?))
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|e| e.path())
        .collect();
    entries.sort();
    Ok(entries)
}

fn has_extension(path: &Path, extensions: &[&str]) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| extensions.iter().any(|x| e.eq_ignore_ascii_case(x)))
        .unwrap_or(false)
}

/// Walks `root/<class>/<file>` in sorted order, loading every recognized
/// image. Per-file failures are collected, not fatal; an entirely empty
/// harvest is an error.
pub fn load_dataset(root: &Path) -> Result<Dataset> {
    let (items, failures) = walk_dataset(root, &IMAGE_EXTENSIONS, load_image)?;
    let samples = items
        .into_iter()
        .map(|(label, source, image)| LabeledSample {
            label,
            source,
            image,
        })
        .collect();
    Ok(Dataset { samples, failures })
}

/// One signal with its class label and origin.
#[derive(Debug, Clone)]
pub struct LabeledSignal {
    pub label: String,
    pub source: PathBuf,
    pub values: Vec<f64>,
}

/// Signal-dataset analogue of [`load_dataset`]: `root/<class>/*.{txt,csv,dat}`.
pub fn load_signal_dataset(root: &Path) -> Result<(Vec<LabeledSignal>, Vec<LoadFailure>)> {
    let (items, failures) = walk_dataset(root, &SIGNAL_EXTENSIONS, load_signal)?;
    let signals = items
        .into_iter()
        .map(|(label, source, values)| LabeledSignal {
            label,
            source,
            values,
        })
        .collect();
    Ok((signals, failures))
}

fn walk_dataset<T>(
    root: &Path,
    extensions: &[&str],
    mut load: impl FnMut(&Path) -> Result<T>,
) -> Result<(Vec<(String, PathBuf, T)>, Vec<LoadFailure>)> {
    if !root.is_dir() {
        return Err(Error::NotFound(root.to_path_buf()));
    }
    let mut samples = Vec::new();
    let mut failures = Vec::new();
    for class_dir in sorted_entries(root)? {
        if !class_dir.is_dir() {
            continue;
        }
        let label = class_dir
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default()
            .to_string();
        if label.is_empty() {
            continue;
        }
        for file in sorted_entries(&class_dir)? {
            if !file.is_file() || !has_extension(&file, extensions) {
                continue;
            }
            match load(&file) {
                Ok(item) => samples.push((label.clone(), file, item)),
                Err(error) => failures.push(LoadFailure {
                    source: file,
                    error,
                }),
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::EmptyDataset(root.to_path_buf()));
    }
    Ok((samples, failures))
}

/// Reads a 1D signal from delimited text: one value per line, or values
/// separated by commas/whitespace. Parse failures report the line number.
pub fn load_signal(path: &Path) -> Result<Vec<f64>> {
    if !path.exists() {
        return Err(Error::NotFound(path.to_path_buf()));
    }
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| Error::CorruptFile {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        for token in line.split(|c: char| c == ',' || c.is_whitespace()) {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let parsed: f64 = token.parse().map_err(|_| Error::SignalParse {
                path: path.to_path_buf(),
                line: idx + 1,
                token: token.to_string(),
            })?;
            if !parsed.is_finite() {
                return Err(Error::SignalParse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    token: token.to_string(),
                });
            }
            values.push(parsed);
        }
    }
    if values.is_empty() {
        return Err(Error::SeriesTooShort { len: 0, needed: 1 });
    }
    Ok(values)
}

/// Writes `bytes` to `path` atomically: a temp file in the same directory is
/// fully written, then renamed over the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

//! Matrix-of-intensities image types.
//!
//! [`GrayImage`] is the universal input of every entropy measure in this
//! crate: a dense row-major `H x W` matrix of finite `f64` intensities in
//! arbitrary units. Validation happens at construction, so downstream code
//! can rely on finiteness without re-checking.

use crate::error::{Error, Result};

/// Dense grayscale image, row-major, all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Builds an image from row-major data, validating dimensions and finiteness.
    pub fn from_vec(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::ImageTooSmall {
                height,
                width,
                min_height: 1,
                min_width: 1,
            });
        }
        if data.len() != height * width {
            return Err(Error::DataLength {
                expected: height * width,
                got: data.len(),
                context: "image data",
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                data.push(f(i, j));
            }
        }
        Self::from_vec(height, width, data)
    }

    /// Constant-valued image.
    pub fn constant(height: usize, width: usize, value: f64) -> Result<Self> {
        Self::from_vec(height, width, vec![value; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Row-major pixel data.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.height && col < self.width);
        self.data[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    /// Applies `f` to every pixel, yielding a new image.
    ///
    /// Errors if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_vec(self.height, self.width, self.data.iter().map(|&v| f(v)).collect())
    }
}

/// Three-channel image with `[r, g, b]` per pixel, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    height: usize,
    width: usize,
    data: Vec<[f64; 3]>,
}

impl RgbImage {
    /// Builds from interleaved `r,g,b,r,g,b,...` data of length `height * width * 3`.
    pub fn from_interleaved(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::ImageTooSmall {
                height,
                width,
                min_height: 1,
                min_width: 1,
            });
        }
        if data.len() != height * width * 3 {
            return Err(Error::DataLength {
                expected: height * width * 3,
                got: data.len(),
                context: "interleaved rgb data",
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let data = data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> [f64; 3] {
        self.data[row * self.width + col]
    }
}

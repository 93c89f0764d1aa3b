//! Reference 2D entropy measures used for comparison: sample entropy,
//! distribution entropy and permutation entropy, each following its
//! original definition.
//!
//! Conventions shared by all three: square windows slide with stride 1 in
//! both axes, window distance is Chebyshev (maximum absolute difference),
//! and, mirroring the sample-entropy construction, the window positions for
//! an `m`-scale scan are `(H-m) x (W-m)` so that the matching `(m+1)`-scale
//! window always exists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::stats;

/// Parameters for [`sampen2d`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampEn2dParams {
    /// Embedding window side.
    pub m: usize,
    /// Tolerance as a fraction of the image's population std.
    pub r: f64,
}

impl Default for SampEn2dParams {
    fn default() -> Self {
        Self { m: 2, r: 0.2 }
    }
}

/// Parameters for [`distren2d`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistrEn2dParams {
    /// Window side.
    pub m: usize,
    /// Histogram bin count.
    pub bins: usize,
}

impl Default for DistrEn2dParams {
    fn default() -> Self {
        Self { m: 2, bins: 128 }
    }
}

fn check_window(image: &GrayImage, m: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::ParamRange {
            name: "m",
            value: m as f64,
            interval: "[1, inf)",
        });
    }
    if image.height() <= m || image.width() <= m {
        return Err(Error::ImageTooSmall {
            height: image.height(),
            width: image.width(),
            min_height: m + 1,
            min_width: m + 1,
        });
    }
    Ok(())
}

/// Chebyshev distance between the `side x side` windows anchored at `p` and
/// `q`, with early exit once `limit` is exceeded.
#[inline]
fn window_distance_exceeds(
    image: &GrayImage,
    p: (usize, usize),
    q: (usize, usize),
    side: usize,
    limit: f64,
) -> bool {
    for di in 0..side {
        let row_p = &image.row(p.0 + di)[p.1..p.1 + side];
        let row_q = &image.row(q.0 + di)[q.1..q.1 + side];
        for (a, b) in row_p.iter().zip(row_q) {
            if (a - b).abs() > limit {
                return true;
            }
        }
    }
    false
}

/// Two-dimensional sample entropy: `-ln(A/B)` where `B` counts window pairs
/// matching at scale `m` and `A` at scale `m+1`, self-matches excluded,
/// tolerance `r` times the image's population std.
///
/// The value is non-negative and unbounded above (every `(m+1)`-match is
/// also an `m`-match, so `A <= B`). Returns [`Error::UndefinedEntropy`]
/// when either count is zero; the caller decides how to treat the
/// undefined case.
pub fn sampen2d(image: &GrayImage, params: &SampEn2dParams) -> Result<f64> {
    check_window(image, params.m)?;
    // the negated form also rejects NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(params.r > 0.0) {
        return Err(Error::ParamRange {
            name: "r",
            value: params.r,
            interval: "(0, inf)",
        });
    }
    let m = params.m;
    let tol = params.r * stats::population_std(image.data());
    let rows = image.height() - m;
    let cols = image.width() - m;

    let positions: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .collect();

    let mut matches_m = 0u64;
    let mut matches_m1 = 0u64;
    for (k, &p) in positions.iter().enumerate() {
        for &q in &positions[k + 1..] {
            if window_distance_exceeds(image, p, q, m, tol) {
                continue;
            }
            matches_m += 1;
            // extend to (m+1) x (m+1): the extra right column and bottom row
            let mut within = true;
            for di in 0..=m {
                if (image.get(p.0 + di, p.1 + m) - image.get(q.0 + di, q.1 + m)).abs() > tol {
                    within = false;
                    break;
                }
            }
            if within {
                for dj in 0..m {
                    if (image.get(p.0 + m, p.1 + dj) - image.get(q.0 + m, q.1 + dj)).abs() > tol {
                        within = false;
                        break;
                    }
                }
            }
            if within {
                matches_m1 += 1;
            }
        }
    }

    if matches_m == 0 || matches_m1 == 0 {
        return Err(Error::UndefinedEntropy {
            matches_m,
            matches_m1,
        });
    }
    Ok(-((matches_m1 as f64 / matches_m as f64).ln()))
}

/// Two-dimensional distribution entropy: the Shannon entropy (normalized by
/// `ln(bins)`) of the equal-width histogram of all pairwise Chebyshev
/// distances between `m x m` windows. Bins span `[0, max observed distance]`;
/// an all-zero distance set yields 0.
pub fn distren2d(image: &GrayImage, params: &DistrEn2dParams) -> Result<f64> {
    check_window(image, params.m)?;
    if params.bins < 2 {
        return Err(Error::ParamRange {
            name: "bins",
            value: params.bins as f64,
            interval: "[2, inf)",
        });
    }
    let m = params.m;
    let rows = image.height() - m;
    let cols = image.width() - m;
    let positions: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .collect();

    // pass 1: largest pairwise distance fixes the bin width
    let mut dmax = 0.0f64;
    for (k, &p) in positions.iter().enumerate() {
        for &q in &positions[k + 1..] {
            let d = window_distance(image, p, q, m);
            if d > dmax {
                dmax = d;
            }
        }
    }
    if dmax == 0.0 {
        return Ok(0.0);
    }

    // pass 2: histogram
    let bins = params.bins;
    let mut counts = vec![0u64; bins];
    for (k, &p) in positions.iter().enumerate() {
        for &q in &positions[k + 1..] {
            let d = window_distance(image, p, q, m);
            let idx = ((d / dmax) * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
    }
    Ok(stats::normalized_entropy(&counts, bins))
}

#[inline]
fn window_distance(image: &GrayImage, p: (usize, usize), q: (usize, usize), side: usize) -> f64 {
    let mut max = 0.0f64;
    for di in 0..side {
        let row_p = &image.row(p.0 + di)[p.1..p.1 + side];
        let row_q = &image.row(q.0 + di)[q.1..q.1 + side];
        for (a, b) in row_p.iter().zip(row_q) {
            let d = (a - b).abs();
            if d > max {
                max = d;
            }
        }
    }
    max
}

/// Number of ordinal patterns of a 2x2 block: 4! = 24.
pub const PEREN_PATTERN_COUNT: usize = 24;

/// Two-dimensional permutation entropy over 2x2 blocks.
///
/// Each block is flattened row-major, ranked with stable tie-breaking
/// (first occurrence wins), and the normalized Shannon entropy of the 24
/// ordinal patterns is returned.
pub fn peren2d(image: &GrayImage) -> Result<f64> {
    if image.height() < 2 || image.width() < 2 {
        return Err(Error::ImageTooSmall {
            height: image.height(),
            width: image.width(),
            min_height: 2,
            min_width: 2,
        });
    }
    let mut counts = vec![0u64; PEREN_PATTERN_COUNT];
    for i in 0..image.height() - 1 {
        let cur = image.row(i);
        let below = image.row(i + 1);
        for j in 0..image.width() - 1 {
            let block = [cur[j], cur[j + 1], below[j], below[j + 1]];
            counts[ordinal_pattern_index(&block)] += 1;
        }
    }
    Ok(stats::normalized_entropy(&counts, PEREN_PATTERN_COUNT))
}

/// Lehmer index of the stable argsort of four values, in [0, 24).
#[inline]
fn ordinal_pattern_index(block: &[f64; 4]) -> usize {
    let mut order = [0usize, 1, 2, 3];
    // stable insertion sort on (value, original index)
    for i in 1..4 {
        let mut k = i;
        while k > 0 && block[order[k - 1]] > block[order[k]] {
            order.swap(k - 1, k);
            k -= 1;
        }
    }
    // factorial number system over the argsort sequence
    let mut index = 0;
    let factorials = [6, 2, 1];
    for i in 0..3 {
        let smaller_later = order[i + 1..].iter().filter(|&&x| x < order[i]).count();
        index += smaller_later * factorials[i];
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise_image(seed: u64, h: usize, w: usize) -> GrayImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GrayImage::from_fn(h, w, |_, _| rng.gen_range(-1.0..1.0)).unwrap()
    }

    #[test]
    fn sampen_constant_image_is_zero() {
        let img = GrayImage::constant(8, 8, 2.0).unwrap();
        let v = sampen2d(&img, &SampEn2dParams::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn sampen_rejects_tiny_image() {
        let img = GrayImage::constant(2, 2, 0.0).unwrap();
        let err = sampen2d(&img, &SampEn2dParams { m: 2, r: 0.2 }).unwrap_err();
        assert!(matches!(err, Error::ImageTooSmall { .. }));
    }

    #[test]
    fn sampen_single_position_is_undefined() {
        // H = W = m + 1: one window position, zero pairs
        let img = noise_image(8, 3, 3);
        let err = sampen2d(&img, &SampEn2dParams { m: 2, r: 0.2 }).unwrap_err();
        assert!(matches!(
            err,
            Error::UndefinedEntropy {
                matches_m: 0,
                matches_m1: 0
            }
        ));
    }

    #[test]
    fn sampen_shift_invariant() {
        let img = noise_image(3, 20, 20);
        let shifted = img.map(|v| v + 100.0).unwrap();
        let p = SampEn2dParams { m: 1, r: 0.2 };
        let a = sampen2d(&img, &p).unwrap();
        let b = sampen2d(&shifted, &p).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }

    #[test]
    fn sampen_scale_invariant() {
        let img = noise_image(4, 20, 20);
        let scaled = img.map(|v| v * 3.0).unwrap();
        let p = SampEn2dParams { m: 1, r: 0.2 };
        assert_abs_diff_eq!(
            sampen2d(&img, &p).unwrap(),
            sampen2d(&scaled, &p).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn distren_constant_image_is_zero() {
        let img = GrayImage::constant(6, 9, 5.0).unwrap();
        assert_eq!(distren2d(&img, &DistrEn2dParams::default()).unwrap(), 0.0);
    }

    #[test]
    fn distren_range_and_invariance() {
        let img = noise_image(5, 24, 24);
        let p = DistrEn2dParams::default();
        let v = distren2d(&img, &p).unwrap();
        assert!((0.0..=1.0).contains(&v));
        let mapped = img.map(|x| 2.0 * x + 7.0).unwrap();
        assert_abs_diff_eq!(v, distren2d(&mapped, &p).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn distren_rejects_one_bin() {
        let img = noise_image(6, 8, 8);
        assert!(distren2d(&img, &DistrEn2dParams { m: 2, bins: 1 }).is_err());
    }

    #[test]
    fn peren_constant_image_is_zero() {
        let img = GrayImage::constant(10, 10, 1.0).unwrap();
        assert_eq!(peren2d(&img).unwrap(), 0.0);
    }

    #[test]
    fn peren_monotone_ramp_is_zero() {
        let w = 7;
        let img = GrayImage::from_fn(5, w, |i, j| (i * w + j) as f64).unwrap();
        assert_eq!(peren2d(&img).unwrap(), 0.0);
    }

    #[test]
    fn peren_noise_near_one() {
        let v = peren2d(&noise_image(9, 40, 40)).unwrap();
        assert!(v > 0.9 && v <= 1.0);
    }

    #[test]
    fn peren_shift_invariant_exact_pattern() {
        let img = noise_image(10, 16, 16);
        let shifted = img.map(|v| v + 5.0).unwrap();
        assert_abs_diff_eq!(
            peren2d(&img).unwrap(),
            peren2d(&shifted).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn ordinal_patterns_bijective_on_distinct_values() {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        let vals = [0.0, 1.0, 2.0, 3.0];
        // all permutations of four distinct values hit distinct indices
        let mut perm = [0, 1, 2, 3];
        let mut indices = Vec::new();
        permutations(&mut perm, 0, &mut indices);
        for p in indices {
            let block = [vals[p[0]], vals[p[1]], vals[p[2]], vals[p[3]]];
            let idx = ordinal_pattern_index(&block);
            assert!(idx < PEREN_PATTERN_COUNT);
            seen.insert(idx);
        }
        assert_eq!(seen.len(), 24);
    }

    fn permutations(perm: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
        if k == 4 {
            out.push(*perm);
            return;
        }
        for i in k..4 {
            perm.swap(k, i);
            permutations(perm, k + 1, out);
            perm.swap(k, i);
        }
    }
}

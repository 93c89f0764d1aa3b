//! Converts 1D signals and raw images into entropy-ready grayscale images:
//! phase-space distance matrices, sliding-window segmentation, grayscale
//! conversion and block-average downsampling.

use crate::error::{Error, Result};
use crate::image::{GrayImage, RgbImage};

/// Delay embedding with delay 1: `N - m + 1` vectors
/// `x(i) = (s[i], ..., s[i+m-1])`.
pub fn embed(series: &[f64], m: usize) -> Result<Vec<Vec<f64>>> {
    if m < 1 {
        return Err(Error::ParamRange {
            name: "m",
            value: m as f64,
            interval: "[1, inf)",
        });
    }
    if series.len() < m {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            needed: m,
        });
    }
    Ok(series.windows(m).map(<[f64]>::to_vec).collect())
}

/// Pairwise Euclidean distances between the delay-embedded vectors of a
/// series, returned as a square grayscale image of side `N - m + 1`.
///
/// The matrix is exactly symmetric with a zero diagonal.
pub fn distance_matrix(series: &[f64], m: usize) -> Result<GrayImage> {
    if m < 1 {
        return Err(Error::ParamRange {
            name: "m",
            value: m as f64,
            interval: "[1, inf)",
        });
    }
    if series.len() < m + 1 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            needed: m + 1,
        });
    }
    if !series.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let side = series.len() - m + 1;
    let mut data = vec![0.0f64; side * side];
    for i in 0..side {
        for j in i + 1..side {
            let mut sq = 0.0;
            for k in 0..m {
                let d = series[i + k] - series[j + k];
                sq += d * d;
            }
            let dist = sq.sqrt();
            data[i * side + j] = dist;
            data[j * side + i] = dist;
        }
    }
    GrayImage::from_vec(side, side, data)
}

/// Windows of fixed length starting at `0, step, 2*step, ...` while the
/// whole window fits; yields `floor((N - window) / step) + 1` windows.
pub fn sliding_windows<'a>(
    series: &'a [f64],
    window: usize,
    step: usize,
) -> Result<Vec<&'a [f64]>> {
    if window < 1 {
        return Err(Error::ParamRange {
            name: "window",
            value: window as f64,
            interval: "[1, inf)",
        });
    }
    if step < 1 {
        return Err(Error::ParamRange {
            name: "step",
            value: step as f64,
            interval: "[1, inf)",
        });
    }
    if window > series.len() {
        return Err(Error::WindowTooLarge {
            window,
            len: series.len(),
        });
    }
    Ok((0..=series.len() - window)
        .step_by(step)
        .map(|start| &series[start..start + window])
        .collect())
}

/// Grayscale by the per-pixel arithmetic mean of the three channels.
pub fn grayscale(rgb: &RgbImage) -> GrayImage {
    GrayImage::from_fn(rgb.height(), rgb.width(), |i, j| {
        let [r, g, b] = rgb.pixel(i, j);
        (r + g + b) / 3.0
    })
    .expect("mean of finite channels is finite")
}

/// Block-average downsampling: each output pixel is the mean of its source
/// block, with blocks partitioning the source as evenly as possible.
/// Identity when the target equals the source size.
pub fn downsample(image: &GrayImage, target_h: usize, target_w: usize) -> Result<GrayImage> {
    if target_h == 0 || target_w == 0 {
        return Err(Error::ImageTooSmall {
            height: target_h,
            width: target_w,
            min_height: 1,
            min_width: 1,
        });
    }
    let (src_h, src_w) = (image.height(), image.width());
    if target_h > src_h || target_w > src_w {
        return Err(Error::UpsampleRequested {
            src_h,
            src_w,
            dst_h: target_h,
            dst_w: target_w,
        });
    }
    GrayImage::from_fn(target_h, target_w, |r, c| {
        let r0 = r * src_h / target_h;
        let r1 = (r + 1) * src_h / target_h;
        let c0 = c * src_w / target_w;
        let c1 = (c + 1) * src_w / target_w;
        let mut sum = 0.0;
        for i in r0..r1 {
            for j in c0..c1 {
                sum += image.get(i, j);
            }
        }
        sum / ((r1 - r0) * (c1 - c0)) as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn embed_basic() {
        let v = embed(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(v, vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn embed_m1_is_identity() {
        let v = embed(&[5.0, 6.0], 1).unwrap();
        assert_eq!(v, vec![vec![5.0], vec![6.0]]);
    }

    #[test]
    fn embed_boundary_single_vector() {
        let v = embed(&[1.0, 2.0, 3.0], 3).unwrap();
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn distance_matrix_hand_example() {
        let d = distance_matrix(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(d.height(), 3);
        assert_abs_diff_eq!(d.get(0, 2), 8.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn distance_matrix_constant_series_is_zero() {
        let d = distance_matrix(&[3.0; 10], 3).unwrap();
        assert!(d.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn distance_matrix_symmetric_zero_diagonal() {
        let s: Vec<f64> = (0..40).map(|i| ((i * i) % 17) as f64).collect();
        let d = distance_matrix(&s, 3).unwrap();
        for i in 0..d.height() {
            assert_eq!(d.get(i, i), 0.0);
            for j in 0..d.width() {
                assert_eq!(d.get(i, j), d.get(j, i));
            }
        }
    }

    #[test]
    fn sliding_window_counts() {
        let series = vec![0.0; 4000];
        assert_eq!(sliding_windows(&series, 150, 10).unwrap().len(), 386);
        let exact = vec![0.0; 150];
        assert_eq!(sliding_windows(&exact, 150, 10).unwrap().len(), 1);
        let series = vec![0.0; 10];
        assert_eq!(sliding_windows(&series, 8, 5).unwrap().len(), 1);
    }

    #[test]
    fn sliding_window_too_large() {
        assert!(matches!(
            sliding_windows(&[1.0, 2.0], 3, 1),
            Err(Error::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn grayscale_mean_of_channels() {
        let rgb = RgbImage::from_interleaved(1, 2, vec![30.0, 60.0, 90.0, 255.0, 0.0, 0.0]).unwrap();
        let gray = grayscale(&rgb);
        assert_eq!(gray.get(0, 0), 60.0);
        assert_eq!(gray.get(0, 1), 85.0);
    }

    #[test]
    fn grayscale_idempotent_on_gray() {
        let rgb = RgbImage::from_interleaved(1, 1, vec![42.0, 42.0, 42.0]).unwrap();
        assert_eq!(grayscale(&rgb).get(0, 0), 42.0);
    }

    #[test]
    fn downsample_constant() {
        let img = GrayImage::constant(4, 4, 3.25).unwrap();
        let out = downsample(&img, 2, 2).unwrap();
        assert_eq!(out, GrayImage::constant(2, 2, 3.25).unwrap());
    }

    #[test]
    fn downsample_block_means() {
        let img = GrayImage::from_fn(4, 4, |i, j| (i * 4 + j) as f64).unwrap();
        let out = downsample(&img, 2, 2).unwrap();
        assert_eq!(out.data(), &[2.5, 4.5, 10.5, 12.5]);
    }

    #[test]
    fn downsample_identity() {
        let img = GrayImage::from_fn(5, 7, |i, j| (i * 31 + j * 7) as f64).unwrap();
        assert_eq!(downsample(&img, 5, 7).unwrap(), img);
    }

    #[test]
    fn downsample_rejects_upsampling() {
        let img = GrayImage::constant(2, 2, 0.0).unwrap();
        assert!(matches!(
            downsample(&img, 4, 4),
            Err(Error::UpsampleRequested { .. })
        ));
    }

    proptest! {
        #[test]
        fn triangle_inequality_small_instances(seed in 0u64..100) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(5..30usize);
            let series: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let d = distance_matrix(&series, 3).unwrap();
            let side = d.height();
            for i in 0..side {
                for j in 0..side {
                    for k in 0..side {
                        prop_assert!(d.get(i, j) <= d.get(i, k) + d.get(k, j) + 1e-12);
                    }
                }
            }
        }

        #[test]
        fn windows_with_step_equal_window_reconstruct_prefix(
            len in 1usize..200, window in 1usize..40,
        ) {
            prop_assume!(window <= len);
            let series: Vec<f64> = (0..len).map(|i| i as f64).collect();
            let windows = sliding_windows(&series, window, window).unwrap();
            let concat: Vec<f64> = windows.iter().flat_map(|w| w.iter().copied()).collect();
            prop_assert_eq!(&series[..concat.len()], concat.as_slice());
        }
    }
}

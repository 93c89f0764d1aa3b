//! Seeded generators for the simulated datasets: colored noise, the
//! mixed periodic/stochastic process, and logistic-map series.
//!
//! Reproducibility contract: every generator is a pure function of its
//! parameters and a 64-bit seed. Randomness comes from ChaCha8 keyed by the
//! seed; where a generator needs several independent draws (the mixed
//! process), it uses ChaCha's stream feature with documented stream ids.
//! Batch drivers derive per-sample seeds with [`derive_seed`], a SplitMix64
//! chain, so results are independent of execution order.

use rand::distributions::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// SplitMix64 mixing step.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a master seed and a tag path,
/// e.g. `derive_seed(master, &[experiment_tag, group, sample])`.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &t in tags {
        state = splitmix64(state ^ splitmix64(t));
    }
    state
}

/// ChaCha8 generator keyed by `seed` on stream `stream`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// 1D colored noise with power spectral density proportional to
/// `f^(-beta)`: white Gaussian draws are shaped in the frequency domain
/// (amplitude scaled by `f^(-beta/2)`, DC removed), inverse-transformed and
/// standardized to mean 0, population std 1.
///
/// `beta = 0` is white, `1` pink, `2` red, `-1` blue.
pub fn colored_noise_1d(len: usize, beta: f64, seed: u64) -> Result<Vec<f64>> {
    if len < 8 {
        return Err(Error::SeriesTooShort { len, needed: 8 });
    }
    if !beta.is_finite() {
        return Err(Error::ParamRange {
            name: "beta",
            value: beta,
            interval: "finite",
        });
    }
    let mut rng = seeded_rng(seed, 0);
    let mut buf: Vec<Complex<f64>> = (0..len)
        .map(|_| Complex::new(rng.sample::<f64, _>(StandardNormal), 0.0))
        .collect();

    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);

    buf[0] = Complex::new(0.0, 0.0);
    for (k, value) in buf.iter_mut().enumerate().skip(1) {
        // two-sided frequency magnitude in cycles per sample
        let f = k.min(len - k) as f64 / len as f64;
        *value *= f.powf(-beta / 2.0);
    }

    planner.plan_fft_inverse(len).process(&mut buf);

    let scale = 1.0 / len as f64;
    let mut out: Vec<f64> = buf.iter().map(|c| c.re * scale).collect();
    standardize_in_place(&mut out);
    Ok(out)
}

fn standardize_in_place(values: &mut [f64]) {
    let mean = crate::stats::mean(values);
    let sd = crate::stats::population_std(values);
    if sd == 0.0 {
        values.iter_mut().for_each(|v| *v = 0.0);
    } else {
        values.iter_mut().for_each(|v| *v = (*v - mean) / sd);
    }
}

/// Colored noise reshaped row-major into a `height x width` image.
pub fn noise_image(height: usize, width: usize, beta: f64, seed: u64) -> Result<GrayImage> {
    let series = colored_noise_1d(height * width, beta, seed)?;
    GrayImage::from_vec(height, width, series)
}

const MIX_UNIFORM_HALF_WIDTH: f64 = 1.732_050_807_568_877_2; // sqrt(3)
const MIX_STREAM_UNIFORM: u64 = 1;
const MIX_STREAM_SELECTOR: u64 = 2;

/// Mixed process image: each pixel takes the periodic sine value
/// `sin(2*pi*i/12) + sin(2*pi*j/12)` (1-based indices) with probability
/// `1 - p`, or a uniform draw on `[-sqrt(3), sqrt(3)]` with probability `p`.
///
/// `p = 0` returns the deterministic sine image without consuming any
/// randomness. Uniform draws come from stream 1 and the Bernoulli selector
/// from stream 2, both keyed by `seed`; one draw per pixel in row-major
/// order.
pub fn mix2d(height: usize, width: usize, p: f64, seed: u64) -> Result<GrayImage> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParamRange {
            name: "p",
            value: p,
            interval: "[0, 1]",
        });
    }
    let sine = |i: usize, j: usize| {
        let two_pi = std::f64::consts::TAU;
        (two_pi * (i + 1) as f64 / 12.0).sin() + (two_pi * (j + 1) as f64 / 12.0).sin()
    };
    if p == 0.0 {
        return GrayImage::from_fn(height, width, sine);
    }
    let mut uniform_rng = seeded_rng(seed, MIX_STREAM_UNIFORM);
    let mut selector_rng = seeded_rng(seed, MIX_STREAM_SELECTOR);
    let uniform = Uniform::new(-MIX_UNIFORM_HALF_WIDTH, MIX_UNIFORM_HALF_WIDTH);
    GrayImage::from_fn(height, width, |i, j| {
        let y: f64 = uniform_rng.sample(uniform);
        let stochastic = selector_rng.gen::<f64>() < p;
        if stochastic {
            y
        } else {
            sine(i, j)
        }
    })
}

/// Logistic-map series `x_{k+1} = a * x_k * (1 - x_k)`.
///
/// Discards `burn_in` leading iterations, then returns `n` values starting
/// with the current state (so `burn_in = 0` starts at `x0`).
pub fn logistic_series(a: f64, x0: f64, n: usize, burn_in: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && a <= 4.0) {
        return Err(Error::ParamRange {
            name: "a",
            value: a,
            interval: "(0, 4]",
        });
    }
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::ParamRange {
            name: "x0",
            value: x0,
            interval: "(0, 1)",
        });
    }
    if n < 1 {
        return Err(Error::InsufficientData { n, needed: 1 });
    }
    let mut x = x0;
    for _ in 0..burn_in {
        x = a * x * (1.0 - x);
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        x = a * x * (1.0 - x);
    }
    Ok(out)
}

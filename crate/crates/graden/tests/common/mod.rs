//! Literal, unoptimized reference implementations used as oracles by the
//! acceptance suite. They follow the published definitions step by step
//! (full window rescans, explicit pattern maps, no early exits, no shared
//! code with the optimized paths beyond the domain types).

#![allow(dead_code)]

use std::collections::HashMap;

use graden::GrayImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Literal gradient entropy: per-block triples in aggregation order,
/// two-pass pooled z-score, if-chain symbolization, hash-map pattern counts.
/// Entropy uses base-10 logs (the ratio is base-independent).
pub fn naive_graden(image: &GrayImage, delta: f64, gamma: f64) -> (f64, Vec<u64>) {
    let (h, w) = (image.height(), image.width());
    assert!(h >= 2 && w >= 2);

    let mut triples: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..h - 1 {
        for j in 0..w - 1 {
            let base = image.get(i, j);
            triples.push((
                image.get(i, j + 1) - base,
                image.get(i + 1, j) - base,
                image.get(i + 1, j + 1) - base,
            ));
        }
    }

    // pooled two-pass moments over the aggregated component vector
    let mut pooled = Vec::with_capacity(triples.len() * 3);
    for &(gh, gv, gd) in &triples {
        pooled.push(gh);
        pooled.push(gv);
        pooled.push(gd);
    }
    let mut sum = 0.0;
    for &v in &pooled {
        sum += v;
    }
    let mean = sum / pooled.len() as f64;
    let mut sq = 0.0;
    for &v in &pooled {
        sq += (v - mean) * (v - mean);
    }
    let sd = (sq / pooled.len() as f64).sqrt();

    let standardize = |v: f64| if sd == 0.0 { 0.0 } else { (v - mean) / sd };
    let symbol = |v: f64| -> i64 {
        if v <= -gamma {
            -2
        } else if v <= -delta {
            -1
        } else if v <= delta {
            0
        } else if v <= gamma {
            1
        } else {
            2
        }
    };

    let mut patterns: HashMap<(i64, i64, i64), u64> = HashMap::new();
    for &(gh, gv, gd) in &triples {
        let key = (
            symbol(standardize(gh)),
            symbol(standardize(gv)),
            symbol(standardize(gd)),
        );
        *patterns.entry(key).or_insert(0) += 1;
    }

    let mut counts = vec![0u64; 125];
    for (&(sh, sv, sd_), &c) in &patterns {
        counts[((sh + 2) * 25 + (sv + 2) * 5 + (sd_ + 2)) as usize] = c;
    }

    let total = triples.len() as f64;
    let mut entropy = 0.0;
    for &c in &counts {
        if c > 0 {
            let p = c as f64 / total;
            entropy -= p * p.log10();
        }
    }
    (entropy / 125f64.log10(), counts)
}

fn chebyshev_full(image: &GrayImage, p: (usize, usize), q: (usize, usize), side: usize) -> f64 {
    let mut max = 0.0f64;
    for di in 0..side {
        for dj in 0..side {
            let d = (image.get(p.0 + di, p.1 + dj) - image.get(q.0 + di, q.1 + dj)).abs();
            if d > max {
                max = d;
            }
        }
    }
    max
}

fn population_std(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Literal 2D sample entropy: independent full scans at both window scales.
/// `None` when either match count is zero.
pub fn naive_sampen2d(image: &GrayImage, m: usize, r: f64) -> Option<f64> {
    let (h, w) = (image.height(), image.width());
    assert!(h > m && w > m);
    let tol = r * population_std(image.data());
    let positions: Vec<(usize, usize)> = (0..h - m)
        .flat_map(|i| (0..w - m).map(move |j| (i, j)))
        .collect();

    let mut b = 0u64;
    for k in 0..positions.len() {
        for l in k + 1..positions.len() {
            if chebyshev_full(image, positions[k], positions[l], m) <= tol {
                b += 1;
            }
        }
    }
    let mut a = 0u64;
    for k in 0..positions.len() {
        for l in k + 1..positions.len() {
            if chebyshev_full(image, positions[k], positions[l], m + 1) <= tol {
                a += 1;
            }
        }
    }
    if a == 0 || b == 0 {
        None
    } else {
        Some(-((a as f64 / b as f64).ln()))
    }
}

/// Literal 2D distribution entropy: all pairwise distances collected into a
/// vector, binned over [0, max], entropy in base 2 normalized by log2(bins).
pub fn naive_distren2d(image: &GrayImage, m: usize, bins: usize) -> f64 {
    let (h, w) = (image.height(), image.width());
    assert!(h > m && w > m);
    let positions: Vec<(usize, usize)> = (0..h - m)
        .flat_map(|i| (0..w - m).map(move |j| (i, j)))
        .collect();

    let mut distances = Vec::new();
    for k in 0..positions.len() {
        for l in k + 1..positions.len() {
            distances.push(chebyshev_full(image, positions[k], positions[l], m));
        }
    }
    let dmax = distances.iter().copied().fold(0.0f64, f64::max);
    if dmax == 0.0 {
        return 0.0;
    }
    let mut counts = vec![0u64; bins];
    for &d in &distances {
        let idx = ((d / dmax) * bins as f64) as usize;
        counts[idx.min(bins - 1)] += 1;
    }
    let total = distances.len() as f64;
    let mut entropy = 0.0;
    for &c in &counts {
        if c > 0 {
            let p = c as f64 / total;
            entropy -= p * p.log2();
        }
    }
    entropy / (bins as f64).log2()
}

/// Literal 2D permutation entropy: explicit stable argsort per block, the
/// argsort sequence itself keys the pattern map.
pub fn naive_peren2d(image: &GrayImage) -> f64 {
    let (h, w) = (image.height(), image.width());
    assert!(h >= 2 && w >= 2);
    let mut patterns: HashMap<[usize; 4], u64> = HashMap::new();
    let mut total = 0u64;
    for i in 0..h - 1 {
        for j in 0..w - 1 {
            let block = [
                image.get(i, j),
                image.get(i, j + 1),
                image.get(i + 1, j),
                image.get(i + 1, j + 1),
            ];
            let mut order = [0usize, 1, 2, 3];
            order.sort_by(|&x, &y| {
                block[x]
                    .partial_cmp(&block[y])
                    .unwrap()
                    .then(x.cmp(&y))
            });
            *patterns.entry(order).or_insert(0) += 1;
            total += 1;
        }
    }
    let total = total as f64;
    let mut entropy = 0.0;
    for &c in patterns.values() {
        let p = c as f64 / total;
        entropy -= p * p.log10();
    }
    entropy / 24f64.log10()
}

/// Standard normal CDF via Simpson quadrature of the density on [0, |x|].
fn normal_cdf_quadrature(x: f64) -> f64 {
    let steps = 40_000;
    let upper = x.abs();
    let h = upper / steps as f64;
    let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut integral = density(0.0) + density(upper);
    for k in 1..steps {
        let t = k as f64 * h;
        integral += density(t) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    integral *= h / 3.0;
    if x >= 0.0 {
        0.5 + integral
    } else {
        0.5 - integral
    }
}

/// Standard normal quantile via bisection against the quadrature CDF.
pub fn inv_cdf_oracle(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let (mut lo, mut hi) = (-10.0f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf_quadrature(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Test-image distributions exercised by the oracle-equivalence criteria.
#[derive(Clone, Copy)]
pub enum ImageKind {
    Gaussian,
    Uniform,
    Quantized,
    Constant,
    Spiky,
}

pub const IMAGE_KINDS: [ImageKind; 5] = [
    ImageKind::Gaussian,
    ImageKind::Uniform,
    ImageKind::Quantized,
    ImageKind::Constant,
    ImageKind::Spiky,
];

pub fn random_image(rng: &mut ChaCha8Rng, kind: ImageKind, min_side: usize, max_side: usize) -> GrayImage {
    use rand_distr::StandardNormal;
    let h = rng.gen_range(min_side..=max_side);
    let w = rng.gen_range(min_side..=max_side);
    GrayImage::from_fn(h, w, |_, _| match kind {
        ImageKind::Gaussian => {
            let z: f64 = rng.sample(StandardNormal);
            25.0 * z + 100.0
        }
        ImageKind::Uniform => rng.gen_range(-50.0..200.0),
        ImageKind::Quantized => rng.gen_range(0u16..=255) as f64,
        ImageKind::Constant => 7.25,
        ImageKind::Spiky => {
            if rng.gen::<f64>() < 0.85 {
                1.0
            } else {
                rng.gen_range(-1000.0..1000.0)
            }
        }
    })
    .unwrap()
}

//! Group statistics backing the evaluation harness: coefficient of
//! variation, Hedges' g effect size, five-number summaries, and the shared
//! normalized Shannon entropy helper.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population standard deviation (divide by n).
pub fn population_std(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Unbiased sample variance (divide by n - 1). Requires n >= 2.
pub fn sample_variance(values: &[f64]) -> f64 {
    debug_assert!(values.len() >= 2);
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Shannon entropy of `counts` normalized by `ln(alphabet_size)`.
///
/// Empty bins contribute nothing (0 log 0 = 0). Returns 0 when all counts
/// are zero or the alphabet is trivial.
pub fn normalized_entropy(counts: &[u64], alphabet_size: usize) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 || alphabet_size < 2 {
        return 0.0;
    }
    let total = total as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum();
    if h == 0.0 {
        // single occupied bin; avoid the -0.0 that f64::sum carries through
        return 0.0;
    }
    h / (alphabet_size as f64).ln()
}

/// Population std divided by |mean|.
pub fn coefficient_of_variation(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InsufficientData {
            n: values.len(),
            needed: 2,
        });
    }
    let m = mean(values);
    if m == 0.0 {
        return Err(Error::ZeroMean);
    }
    Ok(population_std(values) / m.abs())
}

/// Bias-corrected standardized mean difference between two groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub g: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Hedges' g: `J * (mean1 - mean2) / s_pooled` with the small-sample
/// correction `J = 1 - 3 / (4(n1 + n2) - 9)` and `s_pooled` the square root
/// of the df-weighted average of the sample variances.
pub fn hedges_g(group1: &[f64], group2: &[f64]) -> Result<EffectSize> {
    let (n1, n2) = (group1.len(), group2.len());
    if n1 < 2 || n2 < 2 {
        return Err(Error::InsufficientData {
            n: n1.min(n2),
            needed: 2,
        });
    }
    let pooled_var = ((n1 - 1) as f64 * sample_variance(group1)
        + (n2 - 1) as f64 * sample_variance(group2))
        / (n1 + n2 - 2) as f64;
    if pooled_var == 0.0 {
        return Err(Error::DegeneratePooledVariance);
    }
    let correction = 1.0 - 3.0 / (4.0 * (n1 + n2) as f64 - 9.0);
    Ok(EffectSize {
        g: correction * (mean(group1) - mean(group2)) / pooled_var.sqrt(),
        n1,
        n2,
    })
}

/// Five-number summary plus mean and population std; quantiles use linear
/// interpolation between order statistics (the type-7 convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Type-7 quantile of an ascending-sorted slice.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty() && (0.0..=1.0).contains(&q));
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    if lo + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[lo] + (h - lo as f64) * (sorted[lo + 1] - sorted[lo])
}

pub fn group_summary(values: &[f64]) -> Result<GroupSummary> {
    if values.is_empty() {
        return Err(Error::InsufficientData { n: 0, needed: 1 });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    Ok(GroupSummary {
        n: values.len(),
        mean: mean(values),
        std: population_std(values),
        min: sorted[0],
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q3: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DataLength {
            expected: x.len(),
            got: y.len(),
            context: "spearman inputs",
        });
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData {
            n: x.len(),
            needed: 2,
        });
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let (mx, my) = (mean(&rx), mean(&ry));
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for i in 0..rx.len() {
        let (dx, dy) = (rx[i] - mx, ry[i] - my);
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::ConstantInput);
    }
    Ok(cov / (vx * vy).sqrt())
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // 1-based ranks, ties share the average rank of their run
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn cv_of_equal_values_is_zero() {
        assert_eq!(coefficient_of_variation(&[3.0, 3.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn cv_hand_example() {
        // {1,2,3}: population std = sqrt(2/3), mean = 2
        let cv = coefficient_of_variation(&[1.0, 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(cv, 0.816_496_580_927_726 / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn cv_zero_mean_errors() {
        assert!(matches!(
            coefficient_of_variation(&[-1.0, 1.0]),
            Err(Error::ZeroMean)
        ));
    }

    #[test]
    fn cv_needs_two_values() {
        assert!(matches!(
            coefficient_of_variation(&[1.0]),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn hedges_identical_groups_zero() {
        let g = hedges_g(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(g.g, 0.0);
    }

    #[test]
    fn hedges_large_sample_limit_unit_sd() {
        // pooled sd tends to 1 for tiled {m-1, m+1} groups, so g -> -2
        let mut g1 = Vec::new();
        let mut g2 = Vec::new();
        for _ in 0..3000 {
            g1.extend_from_slice(&[9.0, 11.0]);
            g2.extend_from_slice(&[11.0, 13.0]);
        }
        let e = hedges_g(&g1, &g2).unwrap();
        assert_abs_diff_eq!(e.g, -2.0, epsilon = 2e-3);
    }

    #[test]
    fn hedges_large_sample_limit_three_level_groups() {
        // tiled {9,10,11} has population sd sqrt(2/3); the limit is -sqrt(6)
        let mut g1 = Vec::new();
        let mut g2 = Vec::new();
        for _ in 0..2000 {
            g1.extend_from_slice(&[9.0, 10.0, 11.0]);
            g2.extend_from_slice(&[11.0, 12.0, 13.0]);
        }
        let e = hedges_g(&g1, &g2).unwrap();
        assert_abs_diff_eq!(e.g, -6.0f64.sqrt(), epsilon = 2e-3);
    }

    #[test]
    fn hedges_degenerate_pooled_variance() {
        assert!(matches!(
            hedges_g(&[5.0, 5.0], &[5.0, 5.0]),
            Err(Error::DegeneratePooledVariance)
        ));
    }

    #[test]
    fn summary_singleton() {
        let s = group_summary(&[5.0]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (5.0, 5.0, 5.0, 5.0, 5.0));
    }

    #[test]
    fn summary_even_count_median() {
        let s = group_summary(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.median, 2.5);
    }

    #[test]
    fn summary_quartiles_101_values() {
        let values: Vec<f64> = (0..=100).map(f64::from).collect();
        let s = group_summary(&values).unwrap();
        assert_eq!((s.q1, s.q3), (25.0, 75.0));
    }

    #[test]
    fn normalized_entropy_uniform_is_one() {
        let counts = vec![7u64; 125];
        assert_abs_diff_eq!(normalized_entropy(&counts, 125), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn normalized_entropy_single_bin_is_zero() {
        let mut counts = vec![0u64; 24];
        counts[3] = 100;
        assert_eq!(normalized_entropy(&counts, 24), 0.0);
    }

    #[test]
    fn spearman_monotone_is_one() {
        let x: Vec<f64> = (0..20).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        assert_abs_diff_eq!(spearman(&x, &y).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn spearman_handles_ties() {
        let x = [1.0, 1.0, 2.0, 3.0];
        let y = [2.0, 2.0, 4.0, 6.0];
        assert_abs_diff_eq!(spearman(&x, &y).unwrap(), 1.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn hedges_antisymmetric(
            a in proptest::collection::vec(-50.0..50.0f64, 2..20),
            b in proptest::collection::vec(-50.0..50.0f64, 2..20),
        ) {
            if let (Ok(e1), Ok(e2)) = (hedges_g(&a, &b), hedges_g(&b, &a)) {
                prop_assert_eq!(e1.g, -e2.g);
            }
        }

        #[test]
        fn hedges_shift_invariant(
            a in proptest::collection::vec(-50.0..50.0f64, 3..15),
            b in proptest::collection::vec(-50.0..50.0f64, 3..15),
            shift in -100.0..100.0f64,
        ) {
            let a2: Vec<f64> = a.iter().map(|v| v + shift).collect();
            let b2: Vec<f64> = b.iter().map(|v| v + shift).collect();
            if let (Ok(e1), Ok(e2)) = (hedges_g(&a, &b), hedges_g(&a2, &b2)) {
                prop_assert!((e1.g - e2.g).abs() < 1e-6);
            }
        }

        #[test]
        fn cv_scale_invariant(
            a in proptest::collection::vec(1.0..50.0f64, 2..20),
            scale in 0.01..100.0f64,
        ) {
            let scaled: Vec<f64> = a.iter().map(|v| v * scale).collect();
            let c1 = coefficient_of_variation(&a).unwrap();
            let c2 = coefficient_of_variation(&scaled).unwrap();
            prop_assert!((c1 - c2).abs() < 1e-9);
        }

        #[test]
        fn summary_permutation_invariant(
            mut a in proptest::collection::vec(-50.0..50.0f64, 1..30),
        ) {
            let s1 = group_summary(&a).unwrap();
            a.reverse();
            let s2 = group_summary(&a).unwrap();
            prop_assert_eq!(s1.min, s2.min);
            prop_assert_eq!(s1.q1, s2.q1);
            prop_assert_eq!(s1.median, s2.median);
            prop_assert_eq!(s1.q3, s2.q3);
            prop_assert_eq!(s1.max, s2.max);
        }
    }
}

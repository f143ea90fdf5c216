//! Feature selection statistics: chi-square with an analytic p-value and
//! information gain / gain ratio with permutation p-values. Continuous
//! features are discretized into quantile bins first.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};
use crate::splitmix64;

pub const DEFAULT_BINS: usize = 10;
pub const DEFAULT_PERMUTATIONS: usize = 1000;

/// Assigns each value to a quantile bin. Duplicate cut points collapse,
/// so constant columns land in a single bin. Bin ids are dense.
pub fn quantile_bins(values: &[f64], bins: usize) -> Vec<usize> {
    assert!(bins >= 1, "need at least one bin");
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite feature values"));
    // inclusive upper-edge cut points at the 1/bins .. (bins-1)/bins
    // quantiles
    let mut edges: Vec<f64> = (1..bins)
        .map(|b| sorted[(b * n / bins).saturating_sub(1)])
        .collect();
    edges.dedup_by(|a, b| a == b);
    let raw: Vec<usize> = values
        .iter()
        .map(|v| edges.iter().filter(|e| v > e).count())
        .collect();
    // densify ids so every bin in 0..k is populated
    let mut seen: Vec<usize> = raw.clone();
    seen.sort_unstable();
    seen.dedup();
    raw.iter()
        .map(|id| seen.binary_search(id).expect("id seen"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p: f64,
    /// True when the contingency table had fewer than two rows or columns
    /// after dropping empties; p is reported as 1 in that case.
    pub degenerate: bool,
}

/// Pearson chi-square test of independence between a discretized feature
/// and the class labels. The p-value is the regularized upper incomplete
/// gamma function Q(dof/2, statistic/2).
pub fn chi_square(feature_bins: &[usize], labels: &[u8]) -> Result<ChiSquare> {
    if feature_bins.len() != labels.len() || feature_bins.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{} feature bins vs {} labels",
            feature_bins.len(),
            labels.len()
        )));
    }
    let rows = feature_bins.iter().max().unwrap() + 1;
    let mut table = vec![[0usize; 2]; rows];
    for (&b, &l) in feature_bins.iter().zip(labels) {
        table[b][l as usize] += 1;
    }
    table.retain(|row| row[0] + row[1] > 0);
    let col_totals = [
        table.iter().map(|r| r[0]).sum::<usize>(),
        table.iter().map(|r| r[1]).sum::<usize>(),
    ];
    let cols = col_totals.iter().filter(|&&c| c > 0).count();
    if table.len() < 2 || cols < 2 {
        return Ok(ChiSquare {
            statistic: 0.0,
            dof: 0,
            p: 1.0,
            degenerate: true,
        });
    }
    let total = (col_totals[0] + col_totals[1]) as f64;
    let mut statistic = 0.0;
    for row in &table {
        let row_total = (row[0] + row[1]) as f64;
        for c in 0..2 {
            let expected = row_total * col_totals[c] as f64 / total;
            let observed = row[c] as f64;
            statistic += (observed - expected).powi(2) / expected;
        }
    }
    let dof = (table.len() - 1) * (cols - 1);
    let p = if statistic <= 0.0 {
        1.0
    } else {
        gamma_ur(dof as f64 / 2.0, statistic / 2.0)
    };
    Ok(ChiSquare {
        statistic,
        dof,
        p,
        degenerate: false,
    })
}

fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum()
}

fn label_counts(labels: &[u8]) -> [usize; 2] {
    let ones = labels.iter().filter(|&&l| l == 1).count();
    [labels.len() - ones, ones]
}

/// H(label) - H(label | feature), in bits.
pub fn info_gain(feature_bins: &[usize], labels: &[u8]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let h_label = entropy(&label_counts(labels));
    let rows = feature_bins.iter().max().map_or(0, |m| m + 1);
    let mut per_bin = vec![[0usize; 2]; rows];
    for (&b, &l) in feature_bins.iter().zip(labels) {
        per_bin[b][l as usize] += 1;
    }
    let n = labels.len() as f64;
    let conditional: f64 = per_bin
        .iter()
        .map(|row| {
            let weight = (row[0] + row[1]) as f64 / n;
            weight * entropy(row)
        })
        .sum();
    h_label - conditional
}

/// Information gain normalized by the feature's own entropy; zero when
/// the feature is constant.
pub fn gain_ratio(feature_bins: &[usize], labels: &[u8]) -> f64 {
    let rows = feature_bins.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![0usize; rows];
    for &b in feature_bins {
        counts[b] += 1;
    }
    let h_feature = entropy(&counts);
    if h_feature == 0.0 {
        return 0.0;
    }
    info_gain(feature_bins, labels) / h_feature
}

/// Permutation p-value: the fraction of label shuffles whose statistic
/// reaches the observed one, floored at 1/(permutations + 1).
pub fn permutation_p(
    statistic: impl Fn(&[usize], &[u8]) -> f64,
    feature_bins: &[usize],
    labels: &[u8],
    permutations: usize,
    seed: u64,
) -> f64 {
    let observed = statistic(feature_bins, labels);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled: Vec<u8> = labels.to_vec();
    let mut reached = 0usize;
    for _ in 0..permutations {
        for i in (1..shuffled.len()).rev() {
            let j = rng.random_range(0..=i);
            shuffled.swap(i, j);
        }
        if statistic(feature_bins, &shuffled) >= observed - 1e-12 {
            reached += 1;
        }
    }
    (reached as f64 / permutations as f64).max(1.0 / (permutations as f64 + 1.0))
}

/// The p-value panel for one feature column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureStat {
    pub feature_name: String,
    pub chi_square_p: f64,
    pub info_gain: f64,
    pub info_gain_p: f64,
    pub gain_ratio: f64,
    pub gain_ratio_p: f64,
}

/// Runs all three tests on one continuous column.
pub fn feature_stat(
    name: &str,
    values: &[f64],
    labels: &[u8],
    bins: usize,
    permutations: usize,
    seed: u64,
) -> Result<FeatureStat> {
    let binned = quantile_bins(values, bins);
    let chi = chi_square(&binned, labels)?;
    let ig_seed = splitmix64(seed ^ fnv_name(name));
    let gr_seed = splitmix64(ig_seed);
    Ok(FeatureStat {
        feature_name: name.to_string(),
        chi_square_p: chi.p,
        info_gain: info_gain(&binned, labels),
        info_gain_p: permutation_p(info_gain_usize, &binned, labels, permutations, ig_seed),
        gain_ratio: gain_ratio(&binned, labels),
        gain_ratio_p: permutation_p(gain_ratio_usize, &binned, labels, permutations, gr_seed),
    })
}

fn info_gain_usize(bins: &[usize], labels: &[u8]) -> f64 {
    info_gain(bins, labels)
}

fn gain_ratio_usize(bins: &[usize], labels: &[u8]) -> f64 {
    gain_ratio(bins, labels)
}

fn fnv_name(name: &str) -> u64 {
    crate::fnv1a64(name.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn quantile_bins_split_evenly() {
        let values: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let bins = quantile_bins(&values, 10);
        assert_eq!(bins.iter().max(), Some(&9));
        for b in 0..10 {
            let count = bins.iter().filter(|&&x| x == b).count();
            assert_eq!(count, 10, "bin {b}");
        }
    }

    #[test]
    fn constant_column_collapses_to_one_bin() {
        let bins = quantile_bins(&[7.0; 50], 10);
        assert!(bins.iter().all(|&b| b == 0));
    }

    #[test]
    fn equal_values_share_a_bin() {
        let values = vec![1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0];
        let bins = quantile_bins(&values, 4);
        assert_eq!(bins[0], bins[3]);
        assert_ne!(bins[0], bins[4]);
    }

    #[test]
    fn chi_square_on_perfect_dependence() {
        let labels: Vec<u8> = (0..200).map(|i| (i % 2) as u8).collect();
        let feature: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
        let chi = chi_square(&feature, &labels).unwrap();
        assert!(chi.p < 1e-10, "p = {}", chi.p);
    }

    #[test]
    fn chi_square_on_exact_independence() {
        // proportional table: statistic exactly zero
        let mut feature = Vec::new();
        let mut labels = Vec::new();
        for (bin, label, count) in [(0, 0, 30), (0, 1, 10), (1, 0, 60), (1, 1, 20)] {
            for _ in 0..count {
                feature.push(bin);
                labels.push(label);
            }
        }
        let chi = chi_square(&feature, &labels).unwrap();
        assert_eq!(chi.statistic, 0.0);
        assert_eq!(chi.p, 1.0);
        assert!(!chi.degenerate);
    }

    #[test]
    fn chi_square_reference_value() {
        // Q(1/2, 3.84/2) is approximately 0.05004
        let p = gamma_ur(0.5, 3.84 / 2.0);
        assert!((p - 0.050).abs() < 5e-4, "p = {p}");
        // chi-square cdf sanity: Q(1, 5.99/2) ~ 0.05 for dof 2
        let p2 = gamma_ur(1.0, 5.99 / 2.0);
        assert!((p2 - 0.050).abs() < 5e-4, "p2 = {p2}");
    }

    #[test]
    fn chi_square_degenerate_table() {
        let chi = chi_square(&[0, 0, 0], &[1, 1, 1]).unwrap();
        assert!(chi.degenerate);
        assert_eq!(chi.p, 1.0);
    }

    #[test]
    fn info_gain_of_label_equals_label_entropy() {
        let labels: Vec<u8> = (0..40).map(|i| u8::from(i < 10)).collect();
        let feature: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
        let h = {
            let p = 0.25f64;
            -(p * p.log2() + 0.75 * 0.75f64.log2())
        };
        assert!((info_gain(&feature, &labels) - h).abs() < 1e-12);
        assert!((gain_ratio(&feature, &labels) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_feature_has_zero_gain() {
        let labels: Vec<u8> = (0..20).map(|i| (i % 2) as u8).collect();
        let feature = vec![0usize; 20];
        assert_eq!(info_gain(&feature, &labels), 0.0);
        assert_eq!(gain_ratio(&feature, &labels), 0.0);
    }

    #[test]
    fn dependent_feature_yields_tiny_permutation_p() {
        let labels: Vec<u8> = (0..100).map(|i| (i % 2) as u8).collect();
        let feature: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
        let p = permutation_p(info_gain_usize, &feature, &labels, 500, 1);
        assert!(p <= 1.0 / 500.0 + 1e-12, "p = {p}");
    }

    #[test]
    fn independent_feature_permutation_p_is_uniformish() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 60;
        let mut total = 0.0;
        let trials = 50;
        for t in 0..trials {
            let labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2) as u8).collect();
            let feature: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            total += permutation_p(info_gain_usize, &feature, &labels, 200, t as u64);
        }
        let mean = total / trials as f64;
        assert!(
            (0.35..=0.65).contains(&mean),
            "mean permutation p {mean} outside null band"
        );
    }

    #[test]
    fn feature_stat_p_values_stay_in_unit_interval() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let values: Vec<f64> = (0..80).map(|_| rng.random_range(-2.0..2.0)).collect();
        let labels: Vec<u8> = (0..80).map(|_| rng.random_range(0..2) as u8).collect();
        let stat = feature_stat("col", &values, &labels, 10, 100, 3).unwrap();
        for p in [stat.chi_square_p, stat.info_gain_p, stat.gain_ratio_p] {
            assert!(p > 0.0 && p <= 1.0, "p = {p}");
        }
    }
}

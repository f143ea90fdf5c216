//! Evaluation harness: stratified k-fold splitting, classification
//! metrics with oracle-checked AUC, feature-selection statistics, and the
//! cross-validated experiment runner.

pub mod experiment;
pub mod featstats;
pub mod metrics;
pub mod plots;

pub use experiment::{run_experiment, Ablation, ExperimentConfig, ExperimentResult, MetricsRow};
pub use featstats::{
    chi_square, feature_stat, gain_ratio, info_gain, permutation_p, quantile_bins, ChiSquare,
    FeatureStat, DEFAULT_BINS, DEFAULT_PERMUTATIONS,
};
pub use metrics::{auc_roc, classification_metrics, ClassificationMetrics, RocCurve};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gcn::FoldMasks;

fn shuffled(mut items: Vec<usize>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
    items
}

/// Splits `labels` into `k` disjoint test folds covering every index.
/// Stratified mode shuffles within each class and deals round-robin, so
/// per-fold class counts stay within one of proportional; it rejects any
/// class with fewer than `k` members.
pub fn kfold(labels: &[u8], k: usize, stratified: bool, seed: u64) -> Result<Vec<FoldMasks>> {
    let n = labels.len();
    if k < 2 {
        return Err(Error::InvalidInput(format!("k = {k} must be at least 2")));
    }
    if n < k {
        return Err(Error::InvalidInput(format!(
            "cannot split {n} samples into {k} folds"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test_folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    if stratified {
        for class in [0u8, 1u8] {
            let members: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
            if members.is_empty() {
                continue;
            }
            if members.len() < k {
                return Err(Error::InvalidInput(format!(
                    "class {class} has only {} members for {k} stratified folds",
                    members.len()
                )));
            }
            let members = shuffled(members, &mut rng);
            for (pos, idx) in members.into_iter().enumerate() {
                test_folds[pos % k].push(idx);
            }
        }
    } else {
        let order = shuffled((0..n).collect(), &mut rng);
        for (pos, idx) in order.into_iter().enumerate() {
            test_folds[pos % k].push(idx);
        }
    }
    Ok(test_folds
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let mut in_test = vec![false; n];
            for &i in &test {
                in_test[i] = true;
            }
            let train: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
            FoldMasks {
                train_idx: train,
                test_idx: test,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn folds_partition_all_indices() {
        let labels = vec![0u8; 10];
        let folds = kfold(&labels, 5, false, 1).unwrap();
        assert_eq!(folds.len(), 5);
        let mut seen = vec![false; 10];
        for fold in &folds {
            assert_eq!(fold.test_idx.len(), 2);
            assert_eq!(fold.train_idx.len(), 8);
            for &i in &fold.test_idx {
                assert!(!seen[i], "index {i} in two test folds");
                seen[i] = true;
                assert!(!fold.train_idx.contains(&i));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn stratified_folds_respect_class_ratios() {
        let mut labels = vec![0u8; 80];
        labels.extend(vec![1u8; 20]);
        let folds = kfold(&labels, 5, true, 7).unwrap();
        for fold in &folds {
            let minority = fold.test_idx.iter().filter(|&&i| labels[i] == 1).count();
            let majority = fold.test_idx.len() - minority;
            assert!((3..=5).contains(&minority), "minority count {minority}");
            assert!((15..=17).contains(&majority), "majority count {majority}");
        }
    }

    #[test]
    fn per_fold_proportions_stay_near_global() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for trial in 0..20 {
            let n = rng.random_range(40..200);
            let minority = rng.random_range(10..n / 2);
            let mut labels = vec![0u8; n - minority];
            labels.extend(vec![1u8; minority]);
            let labels = {
                let mut l = labels;
                for i in (1..l.len()).rev() {
                    let j = rng.random_range(0..=i);
                    l.swap(i, j);
                }
                l
            };
            let global = minority as f64 / n as f64;
            let folds = kfold(&labels, 5, true, trial).unwrap();
            for fold in &folds {
                let count = fold.test_idx.iter().filter(|&&i| labels[i] == 1).count();
                let proportion = count as f64 / fold.test_idx.len() as f64;
                assert!(
                    (proportion - global).abs() < 1.0 / fold.test_idx.len() as f64,
                    "trial {trial}: fold proportion {proportion} vs global {global}"
                );
            }
        }
    }

    #[test]
    fn too_many_folds_error() {
        assert!(kfold(&[0, 1, 0], 5, false, 1).is_err());
    }

    #[test]
    fn small_class_under_stratification_errors() {
        let mut labels = vec![0u8; 20];
        labels.push(1);
        labels.push(1);
        assert!(kfold(&labels, 5, true, 1).is_err());
    }

    #[test]
    fn same_seed_same_folds() {
        let labels: Vec<u8> = (0..50).map(|i| (i % 2) as u8).collect();
        let a = kfold(&labels, 5, true, 9).unwrap();
        let b = kfold(&labels, 5, true, 9).unwrap();
        assert_eq!(a, b);
    }
}

//! Classification metrics and the ROC/AUC computation. Macro and micro
//! averages are both emitted because reported tables rarely say which
//! convention they used.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub precision_macro: f64,
    pub recall_macro: f64,
    pub f1_macro: f64,
    pub precision_micro: f64,
    pub recall_micro: f64,
    pub f1_micro: f64,
}

fn safe_div(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Accuracy plus per-class precision/recall/F1 under both macro (average
/// of per-class values) and micro (pooled counts) averaging.
pub fn classification_metrics(pred: &[u8], truth: &[u8]) -> Result<ClassificationMetrics> {
    if pred.len() != truth.len() {
        return Err(Error::InvalidInput(format!(
            "{} predictions vs {} truths",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::InvalidInput("metrics need at least one sample".into()));
    }
    let classes = [0u8, 1u8];
    let mut tp = [0usize; 2];
    let mut fp = [0usize; 2];
    let mut fn_ = [0usize; 2];
    let mut correct = 0usize;
    for (&p, &t) in pred.iter().zip(truth) {
        if p == t {
            correct += 1;
        }
        for (c, &class) in classes.iter().enumerate() {
            match (p == class, t == class) {
                (true, true) => tp[c] += 1,
                (true, false) => fp[c] += 1,
                (false, true) => fn_[c] += 1,
                (false, false) => {}
            }
        }
    }
    let accuracy = correct as f64 / pred.len() as f64;
    let per_class: Vec<(f64, f64)> = (0..2)
        .map(|c| {
            let p = safe_div(tp[c] as f64, (tp[c] + fp[c]) as f64);
            let r = safe_div(tp[c] as f64, (tp[c] + fn_[c]) as f64);
            (p, r)
        })
        .collect();
    let precision_macro = (per_class[0].0 + per_class[1].0) / 2.0;
    let recall_macro = (per_class[0].1 + per_class[1].1) / 2.0;
    let f1_macro = (f1(per_class[0].0, per_class[0].1) + f1(per_class[1].0, per_class[1].1)) / 2.0;
    let tp_sum = (tp[0] + tp[1]) as f64;
    let precision_micro = safe_div(tp_sum, (tp[0] + tp[1] + fp[0] + fp[1]) as f64);
    let recall_micro = safe_div(tp_sum, (tp[0] + tp[1] + fn_[0] + fn_[1]) as f64);
    Ok(ClassificationMetrics {
        accuracy,
        precision_macro,
        recall_macro,
        f1_macro,
        precision_micro,
        recall_micro,
        f1_micro: f1(precision_micro, recall_micro),
    })
}

/// Ordered (false positive rate, true positive rate) points from a sweep
/// over the unique score thresholds, highest first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
}

/// AUC in the Mann-Whitney form (ties count one half) together with the
/// ROC curve. Requires both classes present.
pub fn auc_roc(scores: &[f64], truth: &[u8]) -> Result<(f64, RocCurve)> {
    if scores.len() != truth.len() {
        return Err(Error::InvalidInput(format!(
            "{} scores vs {} truths",
            scores.len(),
            truth.len()
        )));
    }
    let positives = truth.iter().filter(|&&t| t == 1).count();
    let negatives = truth.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::InvalidInput(
            "AUC needs both classes in the truth vector".into(),
        ));
    }

    // average ranks of the scores, ties shared
    let n = scores.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            if truth[idx] == 1 {
                rank_sum_pos += rank;
            }
        }
        i = j + 1;
    }
    let p = positives as f64;
    let q = negatives as f64;
    let auc = (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * q);

    // threshold sweep, descending unique scores
    let mut desc = order;
    desc.reverse();
    let mut points = vec![(0.0, 0.0)];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut k = 0;
    while k < n {
        let threshold = scores[desc[k]];
        while k < n && scores[desc[k]] == threshold {
            if truth[desc[k]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        points.push((fp as f64 / q, tp as f64 / p));
    }
    Ok((auc, RocCurve { points }))
}

//! Cross-validated experiment runner: trains the GCN (and the
//! identity-adjacency MLP ablation) per fold, collects per-fold metric
//! rows plus a macro row, and pools out-of-fold scores into one ROC
//! curve per model.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::metrics::{auc_roc, classification_metrics, ClassificationMetrics, RocCurve};
use crate::features::{standardize, FeatureMatrix};
use crate::gcn::{FoldMasks, GcnConfig, GcnModel};
use crate::graph::{normalize, NormalizedAdjacency, ReplyGraph};
use crate::splitmix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ablation {
    Gcn,
    Mlp,
    Both,
}

impl Ablation {
    pub fn models(self) -> Vec<ModelKind> {
        match self {
            Ablation::Gcn => vec![ModelKind::Gcn],
            Ablation::Mlp => vec![ModelKind::Mlp],
            Ablation::Both => vec![ModelKind::Gcn, ModelKind::Mlp],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Gcn,
    Mlp,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Gcn => "gcn",
            ModelKind::Mlp => "mlp",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub k: usize,
    pub stratified: bool,
    pub seed: u64,
    pub ablation: Ablation,
    pub weighted_adjacency: bool,
    pub gcn: GcnConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k: 5,
            stratified: true,
            seed: 42,
            ablation: Ablation::Both,
            weighted_adjacency: true,
            gcn: GcnConfig::default(),
        }
    }
}

/// One row of the metrics table: a fold (or the macro average) for one
/// model.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsRow {
    pub model: String,
    /// "0".."k-1" or "macro".
    pub fold: String,
    #[serde(flatten)]
    pub metrics: ClassificationMetrics,
    pub auc_roc: f64,
}

#[derive(Debug, Clone)]
pub struct ModelOutcome {
    pub kind: ModelKind,
    pub rows: Vec<MetricsRow>,
    /// ROC over the pooled out-of-fold scores.
    pub roc: RocCurve,
    pub pooled_auc: f64,
    /// Per-fold training loss traces.
    pub loss_traces: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub outcomes: Vec<ModelOutcome>,
    pub folds: Vec<FoldMasks>,
}

impl ExperimentResult {
    pub fn outcome(&self, kind: ModelKind) -> Option<&ModelOutcome> {
        self.outcomes.iter().find(|o| o.kind == kind)
    }

    /// Macro-averaged accuracy for one model.
    pub fn macro_accuracy(&self, kind: ModelKind) -> Option<f64> {
        self.outcome(kind)
            .and_then(|o| o.rows.last())
            .map(|row| row.metrics.accuracy)
    }
}

struct FoldOutput {
    row: MetricsRow,
    scores: Vec<(usize, f64)>,
    trace: Vec<f64>,
}

fn run_fold(
    kind: ModelKind,
    fold_index: usize,
    adj: &NormalizedAdjacency,
    features: &FeatureMatrix,
    labels: &[u8],
    masks: &FoldMasks,
    config: &ExperimentConfig,
) -> Result<FoldOutput> {
    let standardized = standardize(features, &masks.train_idx)?;
    let mut gcn_config = config.gcn.clone();
    // seeds derive from (base seed, fold index) only, so the ablation
    // trains bit-identically to the GCN whenever the adjacency is I
    gcn_config.seed = splitmix64(config.seed.wrapping_add(fold_index as u64));
    let mut model = GcnModel::new(standardized.n_cols(), gcn_config)?;
    let trace = model.train(adj, &standardized.values, labels, masks)?;
    let pred = model.predict(adj, &standardized.values)?;
    let scores = model.scores(adj, &standardized.values)?;

    let test_pred: Vec<u8> = masks.test_idx.iter().map(|&i| pred[i]).collect();
    let test_truth: Vec<u8> = masks.test_idx.iter().map(|&i| labels[i]).collect();
    let test_scores: Vec<f64> = masks.test_idx.iter().map(|&i| scores[i]).collect();
    let metrics = classification_metrics(&test_pred, &test_truth)?;
    let (auc, _) = auc_roc(&test_scores, &test_truth)?;
    Ok(FoldOutput {
        row: MetricsRow {
            model: kind.name().to_string(),
            fold: fold_index.to_string(),
            metrics,
            auc_roc: auc,
        },
        scores: masks.test_idx.iter().map(|&i| (i, scores[i])).collect(),
        trace,
    })
}

fn macro_row(kind: ModelKind, rows: &[MetricsRow]) -> MetricsRow {
    let k = rows.len() as f64;
    let mean = |f: fn(&MetricsRow) -> f64| rows.iter().map(f).sum::<f64>() / k;
    MetricsRow {
        model: kind.name().to_string(),
        fold: "macro".to_string(),
        metrics: ClassificationMetrics {
            accuracy: mean(|r| r.metrics.accuracy),
            precision_macro: mean(|r| r.metrics.precision_macro),
            recall_macro: mean(|r| r.metrics.recall_macro),
            f1_macro: mean(|r| r.metrics.f1_macro),
            precision_micro: mean(|r| r.metrics.precision_micro),
            recall_micro: mean(|r| r.metrics.recall_micro),
            f1_micro: mean(|r| r.metrics.f1_micro),
        },
        auc_roc: mean(|r| r.auc_roc),
    }
}

/// Runs the full stratified cross-validation for every requested model.
/// Folds train in parallel as independent model instances; everything is
/// deterministic in `config.seed`.
pub fn run_experiment(
    features: &FeatureMatrix,
    graph: &ReplyGraph,
    labels: &[u8],
    config: &ExperimentConfig,
) -> Result<ExperimentResult> {
    if labels.len() != features.n_rows() {
        return Err(crate::Error::Shape(format!(
            "{} labels for {} feature rows",
            labels.len(),
            features.n_rows()
        )));
    }
    if graph.n() != features.n_rows() {
        return Err(crate::Error::Shape(format!(
            "graph has {} nodes, features {} rows",
            graph.n(),
            features.n_rows()
        )));
    }
    if graph.node_ids() != features.row_ids {
        return Err(crate::Error::InvalidInput(
            "feature rows and graph nodes disagree on user ordering".into(),
        ));
    }
    let folds = super::kfold(labels, config.k, config.stratified, config.seed)?;
    let real_adj = normalize(graph, config.weighted_adjacency);
    let identity = NormalizedAdjacency::identity(graph.n());

    let mut outcomes = Vec::new();
    for kind in config.ablation.models() {
        let adj = match kind {
            ModelKind::Gcn => &real_adj,
            ModelKind::Mlp => &identity,
        };
        let fold_outputs: Vec<FoldOutput> = folds
            .par_iter()
            .enumerate()
            .map(|(i, masks)| run_fold(kind, i, adj, features, labels, masks, config))
            .collect::<Result<_>>()?;

        let mut rows: Vec<MetricsRow> = fold_outputs.iter().map(|o| o.row.clone()).collect();
        rows.push(macro_row(kind, &rows));

        // out-of-fold scores cover every node exactly once
        let mut pooled: Vec<(usize, f64)> = fold_outputs
            .iter()
            .flat_map(|o| o.scores.iter().copied())
            .collect();
        pooled.sort_by_key(|&(i, _)| i);
        let pooled_scores: Vec<f64> = pooled.iter().map(|&(_, s)| s).collect();
        let (pooled_auc, roc) = auc_roc(&pooled_scores, labels)?;

        outcomes.push(ModelOutcome {
            kind,
            rows,
            roc,
            pooled_auc,
            loss_traces: fold_outputs.into_iter().map(|o| o.trace).collect(),
        });
    }
    Ok(ExperimentResult { outcomes, folds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcn::Mat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Features carry the signal, the graph is empty: both models see the
    /// same effective inputs.
    fn feature_only_instance(n: usize, seed: u64) -> (FeatureMatrix, ReplyGraph, Vec<u8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = 6;
        let labels: Vec<u8> = (0..n).map(|i| u8::from(i % 2 == 0)).collect();
        let mut values = Mat::zeros(n, f);
        for i in 0..n {
            let center = if labels[i] == 1 { 1.5 } else { -1.5 };
            for j in 0..f {
                values.set(i, j, center + rng.random_range(-1.0..1.0));
            }
        }
        let ids: Vec<String> = (0..n).map(|i| format!("u{i:04}")).collect();
        let graph = ReplyGraph::from_edges(&ids, &[]);
        let features = FeatureMatrix {
            row_ids: ids,
            column_names: (0..f).map(|j| format!("emb{j}")).collect(),
            values,
        };
        (features, graph, labels)
    }

    fn small_config(epochs: usize, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            seed,
            gcn: GcnConfig {
                hidden_channels: 8,
                epochs,
                learning_rate: 0.1,
                seed,
                ..GcnConfig::default()
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn table_has_k_rows_plus_macro_per_model() {
        let (features, graph, labels) = feature_only_instance(40, 5);
        let result = run_experiment(&features, &graph, &labels, &small_config(30, 5)).unwrap();
        assert_eq!(result.outcomes.len(), 2);
        for outcome in &result.outcomes {
            assert_eq!(outcome.rows.len(), 6);
            assert_eq!(outcome.rows[5].fold, "macro");
            assert_eq!(outcome.loss_traces.len(), 5);
        }
    }

    #[test]
    fn misaligned_node_ordering_is_rejected() {
        let (features, _, labels) = feature_only_instance(10, 1);
        let shuffled: Vec<String> = features.row_ids.iter().rev().cloned().collect();
        let graph = ReplyGraph::from_edges(&shuffled, &[]);
        // same sorted node set, but break the feature row order instead
        let mut broken = features.clone();
        broken.row_ids.swap(0, 1);
        let err = run_experiment(&broken, &graph, &labels, &small_config(5, 1)).unwrap_err();
        assert!(err.to_string().contains("ordering"), "got: {err}");
    }

    #[test]
    fn identical_seeds_reproduce_results_exactly() {
        let (features, graph, labels) = feature_only_instance(30, 8);
        let a = run_experiment(&features, &graph, &labels, &small_config(20, 9)).unwrap();
        let b = run_experiment(&features, &graph, &labels, &small_config(20, 9)).unwrap();
        for (x, y) in a.outcomes.iter().zip(&b.outcomes) {
            assert_eq!(x.pooled_auc, y.pooled_auc);
            for (rx, ry) in x.rows.iter().zip(&y.rows) {
                assert_eq!(rx.metrics.accuracy, ry.metrics.accuracy);
                assert_eq!(rx.auc_roc, ry.auc_roc);
            }
            assert_eq!(x.loss_traces, y.loss_traces);
        }
    }

    #[test]
    fn empty_graph_makes_gcn_equal_mlp() {
        let (features, graph, labels) = feature_only_instance(30, 3);
        let result = run_experiment(&features, &graph, &labels, &small_config(25, 3)).unwrap();
        let gcn = result.macro_accuracy(ModelKind::Gcn).unwrap();
        let mlp = result.macro_accuracy(ModelKind::Mlp).unwrap();
        assert_eq!(gcn, mlp, "identity adjacency must collapse the two models");
    }

    #[test]
    fn feature_signal_is_learnable() {
        let (features, graph, labels) = feature_only_instance(60, 13);
        let result = run_experiment(&features, &graph, &labels, &small_config(60, 13)).unwrap();
        let acc = result.macro_accuracy(ModelKind::Mlp).unwrap();
        assert!(acc >= 0.8, "mlp accuracy {acc} on separable features");
    }
}

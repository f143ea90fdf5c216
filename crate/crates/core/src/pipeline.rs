//! Stage orchestration: every CLI command maps to one stage function
//! here. Stages communicate exclusively through artifacts in the output
//! directory, validate that their upstream artifacts exist, and write
//! byte-stable output so reruns with the same config are identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::experiment::{run_experiment, Ablation, ExperimentConfig, ModelKind};
use crate::eval::plots::{line_chart, Series};
use crate::eval::{feature_stat, FeatureStat};
use crate::features::{
    assemble, embed_users, reply_counts, standardize, user_importance, EmbeddingProvider,
    FeatureMatrix, DEFAULT_EMBEDDING_DIM,
};
use crate::gcn::{FoldMasks, GcnConfig, GcnModel, Mat};
use crate::graph::{build_graph, degree_vs_score_report, normalize, ReplyGraph};
use crate::ingest::{load_jsonl, load_pheme_incident, write_jsonl, IncidentCorpus, IngestReport};
use crate::synth::{generate, SynthSpec};
use crate::weaklabel::{
    build_user_profiles, label_replies, label_report, sentiment_report, MinHashParams,
    UserProfile, DEFAULT_SIMILARITY_THRESHOLD,
};

// ---------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputMode {
    Synth,
    Jsonl,
    Pheme,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct InputConfig {
    pub mode: InputMode,
    /// JSONL file or PHEME incident directory, depending on mode.
    pub path: String,
}

impl Default for InputConfig {
    fn default() -> Self {
        InputConfig {
            mode: InputMode::Synth,
            path: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingMode {
    Hash,
    File,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingConfig {
    pub mode: EmbeddingMode,
    pub dimension: usize,
    pub seed: u64,
    pub file: String,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            mode: EmbeddingMode::Hash,
            dimension: DEFAULT_EMBEDDING_DIM,
            seed: 42,
            file: String::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MinHashConfig {
    pub num_hashes: usize,
    pub shingle_size: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for MinHashConfig {
    fn default() -> Self {
        MinHashConfig {
            num_hashes: 256,
            shingle_size: 2,
            seed: 42,
            threshold: DEFAULT_SIMILARITY_THRESHOLD,
        }
    }
}

impl MinHashConfig {
    pub fn params(&self) -> MinHashParams {
        MinHashParams {
            num_hashes: self.num_hashes,
            shingle_size: self.shingle_size,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub k: usize,
    pub stratified: bool,
    pub seed: u64,
    pub ablation: Ablation,
    pub weighted_adjacency: bool,
    pub bins: usize,
    pub permutations: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            k: 5,
            stratified: true,
            seed: 42,
            ablation: Ablation::Both,
            weighted_adjacency: true,
            bins: crate::eval::DEFAULT_BINS,
            permutations: crate::eval::DEFAULT_PERMUTATIONS,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_initiators: usize,
    pub replies_min: usize,
    pub replies_max: usize,
    pub rumor_fraction: f64,
    pub homophily: f64,
    pub vocab_size: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        let spec = SynthSpec::default();
        SynthConfig {
            n_initiators: spec.n_initiators,
            replies_min: spec.replies_per_tweet.0,
            replies_max: spec.replies_per_tweet.1,
            rumor_fraction: spec.rumor_fraction,
            homophily: spec.homophily,
            vocab_size: spec.vocab_size,
            seed: spec.seed,
        }
    }
}

impl SynthConfig {
    pub fn spec(&self) -> SynthSpec {
        SynthSpec {
            n_initiators: self.n_initiators,
            replies_per_tweet: (self.replies_min, self.replies_max),
            rumor_fraction: self.rumor_fraction,
            homophily: self.homophily,
            vocab_size: self.vocab_size,
            seed: self.seed,
        }
    }
}

/// The full pipeline configuration; defaults reproduce the reference
/// settings (0.85 similarity threshold, 0.5 class cutoff, 300-dim
/// embeddings, 2 layers, 32 channels, 300 epochs, k = 5).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub input: InputConfig,
    pub embedding: EmbeddingConfig,
    pub minhash: MinHashConfig,
    pub gcn: GcnConfig,
    pub eval: EvalConfig,
    pub synth: SynthConfig,
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<PipelineConfig> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn experiment_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            k: self.eval.k,
            stratified: self.eval.stratified,
            seed: self.eval.seed,
            ablation: self.eval.ablation,
            weighted_adjacency: self.eval.weighted_adjacency,
            gcn: self.gcn.clone(),
        }
    }

    /// The incident tag reports carry; the canonical corpus artifact has
    /// a fixed filename, so the name comes from the configured input.
    pub fn incident_name(&self) -> String {
        match self.input.mode {
            InputMode::Synth => format!("synthetic-{}", self.synth.seed),
            InputMode::Jsonl | InputMode::Pheme => Path::new(&self.input.path)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "corpus".to_string()),
        }
    }

    fn embedding_provider(&self) -> Result<EmbeddingProvider> {
        match self.embedding.mode {
            EmbeddingMode::Hash => Ok(EmbeddingProvider::hash_random(
                self.embedding.seed,
                self.embedding.dimension,
            )),
            EmbeddingMode::File => {
                if self.embedding.file.is_empty() {
                    return Err(Error::InvalidInput(
                        "embedding.mode = \"file\" needs embedding.file".into(),
                    ));
                }
                EmbeddingProvider::from_file(Path::new(&self.embedding.file))
            }
        }
    }
}

// ---------------------------------------------------------------------
// artifact plumbing
// ---------------------------------------------------------------------

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.csv";
pub const PROFILES_FILE: &str = "profiles.jsonl";
pub const LABEL_REPORT_FILE: &str = "label_report.csv";
pub const GRAPH_FILE: &str = "graph.csv";
pub const ADJACENCY_FILE: &str = "adjacency.csv";
pub const FEATURES_FILE: &str = "features.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const CONFIG_ECHO_FILE: &str = "config.toml";
pub const SENTIMENT_REPORT_FILE: &str = "sentiment_report.csv";
pub const DEGREE_SCORE_FILE: &str = "degree_vs_score.csv";
pub const FEATURE_STATS_FILE: &str = "feature_stats.csv";
pub const INGEST_REPORT_FILE: &str = "ingest_report.csv";

pub fn roc_file(kind: ModelKind) -> String {
    format!("roc_{}.csv", kind.name())
}

pub fn model_file(kind: ModelKind) -> String {
    format!("model_{}.json", kind.name())
}

pub fn loss_file(kind: ModelKind) -> String {
    format!("loss_{}.csv", kind.name())
}

pub fn fold_metrics_svg(kind: ModelKind) -> String {
    format!("fold_metrics_{}.svg", kind.name())
}

fn require(out_dir: &Path, name: &str, producer: &str) -> Result<PathBuf> {
    let path = out_dir.join(name);
    if !path.exists() {
        return Err(Error::MissingArtifact {
            path,
            command: producer.to_string(),
        });
    }
    Ok(path)
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

// ---------------------------------------------------------------------
// stages
// ---------------------------------------------------------------------

/// `synth`: generate a corpus with planted ground truth.
pub fn stage_synth(config: &PipelineConfig, out_dir: &Path) -> Result<()> {
    ensure_dir(out_dir)?;
    let (corpus, truth) = generate(&config.synth.spec());
    write_jsonl(&corpus, &out_dir.join(CORPUS_FILE))?;
    let mut csv = String::from("user_id,intensity,class\n");
    for (user, score) in &truth.intensity {
        writeln!(csv, "{user},{score},{}", truth.classes[user]).expect("string write");
    }
    write_atomic(&out_dir.join(GROUND_TRUTH_FILE), &csv)
}

/// `ingest`: parse the configured input into the canonical corpus
/// artifact.
pub fn stage_ingest(config: &PipelineConfig, out_dir: &Path) -> Result<IngestReport> {
    ensure_dir(out_dir)?;
    let (corpus, report) = match config.input.mode {
        InputMode::Synth => {
            return Err(Error::InvalidInput(
                "input.mode = \"synth\": run `synth` instead of `ingest`".into(),
            ));
        }
        InputMode::Jsonl => {
            let corpus = load_jsonl(Path::new(&config.input.path))?;
            let report = IngestReport {
                parsed_threads: corpus.records.len(),
                ..IngestReport::default()
            };
            (corpus, report)
        }
        InputMode::Pheme => load_pheme_incident(Path::new(&config.input.path))?,
    };
    write_jsonl(&corpus, &out_dir.join(CORPUS_FILE))?;
    let mut csv = String::from("parsed_threads,skipped_threads,skipped_replies,defaulted_fields\n");
    writeln!(
        csv,
        "{},{},{},{}",
        report.parsed_threads, report.skipped_threads, report.skipped_replies,
        report.defaulted_fields
    )
    .expect("string write");
    write_atomic(&out_dir.join(INGEST_REPORT_FILE), &csv)?;
    Ok(report)
}

fn load_corpus(out_dir: &Path) -> Result<IncidentCorpus> {
    let path = require(out_dir, CORPUS_FILE, "ingest (or synth)")?;
    load_jsonl(&path)
}

fn load_profiles(out_dir: &Path) -> Result<Vec<UserProfile>> {
    let path = require(out_dir, PROFILES_FILE, "label")?;
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut profiles = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        profiles.push(
            serde_json::from_str(line)
                .map_err(|e| Error::parse(&path, idx + 1, e.to_string()))?,
        );
    }
    Ok(profiles)
}

/// `label`: weak-label replies, aggregate user profiles, emit the class
/// count report.
pub fn stage_label(config: &PipelineConfig, out_dir: &Path) -> Result<()> {
    let mut corpus = load_corpus(out_dir)?;
    corpus.incident_name = config.incident_name();
    let labels = label_replies(&corpus, config.minhash.params(), config.minhash.threshold)?;
    let profiles = build_user_profiles(&corpus, &labels)?;
    let mut jsonl = String::new();
    for profile in &profiles {
        jsonl.push_str(&serde_json::to_string(profile).expect("profile serializes"));
        jsonl.push('\n');
    }
    write_atomic(&out_dir.join(PROFILES_FILE), &jsonl)?;

    let report = label_report(&corpus, &profiles);
    let mut csv =
        String::from("incident,rumor_tweets,nonrumor_tweets,rumor_spreaders,nonrumor_spreaders\n");
    writeln!(
        csv,
        "{},{},{},{},{}",
        report.incident,
        report.rumor_tweets,
        report.nonrumor_tweets,
        report.rumor_spreaders,
        report.nonrumor_spreaders
    )
    .expect("string write");
    write_atomic(&out_dir.join(LABEL_REPORT_FILE), &csv)
}

/// `build-graph`: emit the weighted edge list plus a coordinate-list
/// dump of the normalized adjacency for debugging.
pub fn stage_build_graph(config: &PipelineConfig, out_dir: &Path) -> Result<()> {
    let corpus = load_corpus(out_dir)?;
    let graph = build_graph(&corpus);
    let ids = graph.node_ids();
    let mut csv = String::from("src,dst,weight\n");
    for (i, j, w) in graph.edges() {
        writeln!(csv, "{},{},{w}", ids[i], ids[j]).expect("string write");
    }
    write_atomic(&out_dir.join(GRAPH_FILE), &csv)?;

    let adjacency = normalize(&graph, config.eval.weighted_adjacency);
    let mut coo = String::from("row,col,value\n");
    for (i, j, v) in adjacency.entries() {
        writeln!(coo, "{i},{j},{v}").expect("string write");
    }
    write_atomic(&out_dir.join(ADJACENCY_FILE), &coo)
}

fn load_graph(out_dir: &Path, profiles: &[UserProfile]) -> Result<ReplyGraph> {
    let path = require(out_dir, GRAPH_FILE, "build-graph")?;
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let ids: Vec<String> = profiles.iter().map(|p| p.user_id.clone()).collect();
    let index: BTreeMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let (src, dst, w) = match (parts.next(), parts.next(), parts.next()) {
            (Some(s), Some(d), Some(w)) => (s, d, w),
            _ => return Err(Error::parse(&path, lineno + 1, "expected src,dst,weight")),
        };
        let weight: f64 = w
            .parse()
            .map_err(|_| Error::parse(&path, lineno + 1, format!("bad weight {w:?}")))?;
        let si = *index
            .get(src)
            .ok_or_else(|| Error::parse(&path, lineno + 1, format!("unknown node {src}")))?;
        let di = *index
            .get(dst)
            .ok_or_else(|| Error::parse(&path, lineno + 1, format!("unknown node {dst}")))?;
        edges.push((si, di, weight));
    }
    Ok(ReplyGraph::from_edges(&ids, &edges))
}

/// `featurize`: assemble the raw node-feature matrix (standardization is
/// fold-aware and happens at train/evaluate time).
pub fn stage_featurize(config: &PipelineConfig, out_dir: &Path) -> Result<()> {
    let corpus = load_corpus(out_dir)?;
    let profiles = load_profiles(out_dir)?;
    let provider = config.embedding_provider()?;
    let embeddings = embed_users(&corpus, &provider);
    let importance = user_importance(&reply_counts(&corpus));
    let matrix = assemble(&profiles, &embeddings, &importance, provider.dimension())?;

    let mut csv = String::from("user_id,");
    csv.push_str(&matrix.column_names.join(","));
    csv.push('\n');
    for (i, id) in matrix.row_ids.iter().enumerate() {
        csv.push_str(id);
        for j in 0..matrix.n_cols() {
            write!(csv, ",{}", matrix.values.get(i, j)).expect("string write");
        }
        csv.push('\n');
    }
    write_atomic(&out_dir.join(FEATURES_FILE), &csv)
}

fn load_features(out_dir: &Path) -> Result<FeatureMatrix> {
    let path = require(out_dir, FEATURES_FILE, "featurize")?;
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(&path, 1, "empty features file"))?;
    let column_names: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
    let cols = column_names.len();
    let mut row_ids = Vec::new();
    let mut data = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        row_ids.push(
            parts
                .next()
                .ok_or_else(|| Error::parse(&path, lineno + 2, "missing user id"))?
                .to_string(),
        );
        let values: Vec<f64> = parts
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::parse(&path, lineno + 2, format!("bad float {p:?}")))
            })
            .collect::<Result<_>>()?;
        if values.len() != cols {
            return Err(Error::parse(
                &path,
                lineno + 2,
                format!("expected {cols} values, found {}", values.len()),
            ));
        }
        data.extend(values);
    }
    let values = Mat::from_vec(row_ids.len(), cols, data)?;
    Ok(FeatureMatrix {
        row_ids,
        column_names,
        values,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    format_version: u32,
    model: String,
    num_features: usize,
    config: GcnConfig,
    w1: Mat,
    w2: Mat,
}

/// `train`: fit one model per requested kind on all labeled nodes; write
/// checkpoints and loss traces.
pub fn stage_train(config: &PipelineConfig, out_dir: &Path) -> Result<()> {
    let profiles = load_profiles(out_dir)?;
    let features = load_features(out_dir)?;
    let graph = load_graph(out_dir, &profiles)?;
    let labels: Vec<u8> = profiles.iter().map(|p| p.spreader_class).collect();
    let all: Vec<usize> = (0..labels.len()).collect();
    let masks = FoldMasks {
        train_idx: all.clone(),
        test_idx: vec![],
    };
    let standardized = standardize(&features, &all)?;

    for kind in config.eval.ablation.models() {
        let adj = match kind {
            ModelKind::Gcn => normalize(&graph, config.eval.weighted_adjacency),
            ModelKind::Mlp => crate::graph::NormalizedAdjacency::identity(graph.n()),
        };
        let mut model = GcnModel::new(standardized.n_cols(), config.gcn.clone())?;
        let trace = model.train(&adj, &standardized.values, &labels, &masks)?;
        let checkpoint = Checkpoint {
            format_version: 1,
            model: kind.name().to_string(),
            num_features: standardized.n_cols(),
            config: config.gcn.clone(),
            w1: model.w1().clone(),
            w2: model.w2().clone(),
        };
        write_atomic(
            &out_dir.join(model_file(kind)),
            &serde_json::to_string_pretty(&checkpoint).expect("checkpoint serializes"),
        )?;
        let mut csv = String::from("epoch,loss\n");
        for (epoch, loss) in trace.iter().enumerate() {
            writeln!(csv, "{epoch},{loss}").expect("string write");
        }
        write_atomic(&out_dir.join(loss_file(kind)), &csv)?;
    }
    Ok(())
}

/// Restores a trained model from its checkpoint artifact.
pub fn load_model(out_dir: &Path, kind: ModelKind) -> Result<GcnModel> {
    let path = require(out_dir, &model_file(kind), "train")?;
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let checkpoint: Checkpoint =
        serde_json::from_str(&text).map_err(|e| Error::parse(&path, 1, e.to_string()))?;
    if checkpoint.format_version != 1 {
        return Err(Error::InvalidInput(format!(
            "unsupported checkpoint version {}",
            checkpoint.format_version
        )));
    }
    let mut model = GcnModel::new(checkpoint.num_features, checkpoint.config)?;
    model.set_weights(checkpoint.w1, checkpoint.w2)?;
    Ok(model)
}

fn metrics_csv(rows: &[crate::eval::MetricsRow]) -> String {
    let mut csv = String::from(
        "model,fold,accuracy,precision_macro,recall_macro,f1_macro,\
         precision_micro,recall_micro,f1_micro,auc_roc\n",
    );
    for row in rows {
        let m = &row.metrics;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            row.model,
            row.fold,
            m.accuracy,
            m.precision_macro,
            m.recall_macro,
            m.f1_macro,
            m.precision_micro,
            m.recall_micro,
            m.f1_micro,
            row.auc_roc
        )
        .expect("string write");
    }
    csv
}

/// `evaluate`: the cross-validated experiment over every requested model,
/// emitting the metrics table, ROC data, and the fold/ROC charts.
pub fn stage_evaluate(config: &PipelineConfig, out_dir: &Path) -> Result<()> {
    let profiles = load_profiles(out_dir)?;
    let features = load_features(out_dir)?;
    let graph = load_graph(out_dir, &profiles)?;
    let labels: Vec<u8> = profiles.iter().map(|p| p.spreader_class).collect();
    let result = run_experiment(&features, &graph, &labels, &config.experiment_config())?;

    let mut all_rows = Vec::new();
    for outcome in &result.outcomes {
        all_rows.extend(outcome.rows.iter().cloned());
    }
    write_atomic(&out_dir.join(METRICS_FILE), &metrics_csv(&all_rows))?;

    let mut roc_series = Vec::new();
    for outcome in &result.outcomes {
        let mut csv = String::from("fpr,tpr\n");
        for &(fpr, tpr) in &outcome.roc.points {
            writeln!(csv, "{fpr},{tpr}").expect("string write");
        }
        write_atomic(&out_dir.join(roc_file(outcome.kind)), &csv)?;
        roc_series.push(Series {
            label: outcome.kind.name(),
            points: outcome.roc.points.clone(),
        });

        // per-fold metric lines for this model
        let folds: Vec<f64> = (0..config.eval.k).map(|i| i as f64).collect();
        let fold_rows = &outcome.rows[..config.eval.k];
        let series = [
            ("accuracy", fold_rows.iter().map(|r| r.metrics.accuracy).collect::<Vec<_>>()),
            ("precision", fold_rows.iter().map(|r| r.metrics.precision_macro).collect()),
            ("recall", fold_rows.iter().map(|r| r.metrics.recall_macro).collect()),
            ("f1", fold_rows.iter().map(|r| r.metrics.f1_macro).collect()),
            ("auc_roc", fold_rows.iter().map(|r| r.auc_roc).collect()),
        ];
        let chart_series: Vec<Series> = series
            .iter()
            .map(|(label, ys)| Series {
                label,
                points: folds.iter().cloned().zip(ys.iter().cloned()).collect(),
            })
            .collect();
        let chart = line_chart(
            &format!("per-fold metrics ({})", outcome.kind.name()),
            "fold",
            "metric",
            &chart_series,
            Some((0.0, 1.0)),
        );
        write_atomic(&out_dir.join(fold_metrics_svg(outcome.kind)), &chart)?;
    }
    roc_series.push(Series {
        label: "chance",
        points: vec![(0.0, 0.0), (1.0, 1.0)],
    });
    let roc_chart = line_chart(
        "ROC (pooled out-of-fold scores)",
        "false positive rate",
        "true positive rate",
        &roc_series,
        Some((0.0, 1.0)),
    );
    write_atomic(&out_dir.join("roc.svg"), &roc_chart)
}

/// `report`: descriptive artifacts — reply sentiment distribution,
/// degree vs intensity, and the feature selection p-values (per
/// incident; a single-incident run is its own pooled row).
pub fn stage_report(config: &PipelineConfig, out_dir: &Path) -> Result<()> {
    let corpus = load_corpus(out_dir)?;
    let profiles = load_profiles(out_dir)?;
    let features = load_features(out_dir)?;
    let graph = load_graph(out_dir, &profiles)?;

    let sentiment = sentiment_report(&corpus);
    let mut csv =
        String::from("category,positive,negative,neutral_excluded,positive_pct,negative_pct\n");
    for row in &sentiment.rows {
        let category = match row.category {
            crate::ingest::RumorLabel::Rumor => "rumor",
            crate::ingest::RumorLabel::NonRumor => "non-rumor",
        };
        writeln!(
            csv,
            "{category},{},{},{},{},{}",
            row.positive, row.negative, row.neutral_excluded, row.positive_pct, row.negative_pct
        )
        .expect("string write");
    }
    write_atomic(&out_dir.join(SENTIMENT_REPORT_FILE), &csv)?;

    let degree_report = degree_vs_score_report(&graph, &profiles)?;
    let mut csv = String::from("user_id,degree,intensity_score,spearman\n");
    for (user, degree, score) in &degree_report.top {
        writeln!(csv, "{user},{degree},{score},{}", degree_report.spearman)
            .expect("string write");
    }
    write_atomic(&out_dir.join(DEGREE_SCORE_FILE), &csv)?;

    let labels: Vec<u8> = profiles.iter().map(|p| p.spreader_class).collect();
    let mut csv = String::from(
        "incident,feature,chi_square_p,info_gain,info_gain_p,gain_ratio,gain_ratio_p\n",
    );
    for name in ["followers", "favorites", "verified", "user_imp"] {
        let values = features
            .column(name)
            .ok_or_else(|| Error::InvalidInput(format!("feature column {name} missing")))?;
        let stat: FeatureStat = feature_stat(
            name,
            &values,
            &labels,
            config.eval.bins,
            config.eval.permutations,
            config.eval.seed,
        )?;
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            config.incident_name(),
            stat.feature_name,
            stat.chi_square_p,
            stat.info_gain,
            stat.info_gain_p,
            stat.gain_ratio,
            stat.gain_ratio_p
        )
        .expect("string write");
    }
    write_atomic(&out_dir.join(FEATURE_STATS_FILE), &csv)
}

/// `run-all`: echo the effective config, then chain every stage through
/// the same on-disk artifacts the individual commands use.
pub fn run_all(config: &PipelineConfig, out_dir: &Path) -> Result<()> {
    ensure_dir(out_dir)?;
    write_atomic(&out_dir.join(CONFIG_ECHO_FILE), &config.to_toml_string())?;
    match config.input.mode {
        InputMode::Synth => stage_synth(config, out_dir)?,
        _ => {
            stage_ingest(config, out_dir)?;
        }
    }
    stage_label(config, out_dir)?;
    stage_build_graph(config, out_dir)?;
    stage_featurize(config, out_dir)?;
    stage_train(config, out_dir)?;
    stage_evaluate(config, out_dir)?;
    stage_report(config, out_dir)
}

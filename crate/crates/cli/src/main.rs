//! Pipeline command-line interface. Each subcommand runs one stage and
//! communicates with the others through artifacts in the output
//! directory; `run-all` chains everything.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rumorgraph::eval::Ablation;
use rumorgraph::pipeline::{
    self, EmbeddingMode, InputMode, PipelineConfig, CONFIG_ECHO_FILE,
};

#[derive(Parser)]
#[command(
    name = "rumorgraph",
    version,
    about = "Weak-labeled rumor-spreader classification over tweet reply graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML config file; flags below override individual keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Artifact directory (default: $RUMORGRAPH_OUT, then ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Input path: a .jsonl corpus or a PHEME incident directory.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Incident subdirectory under --input (PHEME layout).
    #[arg(long, global = true)]
    incident: Option<String>,

    /// Master seed: overrides the synth, minhash, embedding, model, and
    /// evaluation seeds at once.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Word-vector text file; switches the embedding provider to it.
    #[arg(long, global = true)]
    embedding_file: Option<PathBuf>,

    /// MinHash similarity threshold for reply labeling.
    #[arg(long, global = true)]
    threshold: Option<f64>,

    /// Number of cross-validation folds.
    #[arg(long, global = true)]
    k: Option<usize>,

    /// Training epochs.
    #[arg(long, global = true)]
    epochs: Option<usize>,

    /// Which models to run.
    #[arg(long, global = true, value_enum)]
    ablation: Option<AblationArg>,

    /// Use reply-count edge weights in the adjacency (false binarizes).
    #[arg(long, global = true)]
    weighted_adjacency: Option<bool>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus with planted ground truth.
    Synth,
    /// Parse the configured input into the canonical corpus artifact.
    Ingest,
    /// Weak-label replies and aggregate per-user profiles.
    Label,
    /// Emit the weighted reply-graph edge list.
    BuildGraph,
    /// Assemble the node-feature matrix.
    Featurize,
    /// Train on all labeled nodes and write checkpoints.
    Train,
    /// Run the stratified cross-validation and emit metrics and ROC data.
    Evaluate,
    /// Emit the sentiment, degree-vs-score, and feature-selection reports.
    Report,
    /// Chain every stage end to end.
    RunAll,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Synth => "synth",
            Command::Ingest => "ingest",
            Command::Label => "label",
            Command::BuildGraph => "build-graph",
            Command::Featurize => "featurize",
            Command::Train => "train",
            Command::Evaluate => "evaluate",
            Command::Report => "report",
            Command::RunAll => "run-all",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AblationArg {
    Gcn,
    Mlp,
    Both,
}

impl From<AblationArg> for Ablation {
    fn from(a: AblationArg) -> Ablation {
        match a {
            AblationArg::Gcn => Ablation::Gcn,
            AblationArg::Mlp => Ablation::Mlp,
            AblationArg::Both => Ablation::Both,
        }
    }
}

fn effective_config(cli: &Cli) -> anyhow::Result<PipelineConfig> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(input) = &cli.input {
        let path = match &cli.incident {
            Some(incident) => input.join(incident),
            None => input.clone(),
        };
        config.input.mode = if path.extension().is_some_and(|e| e == "jsonl") {
            InputMode::Jsonl
        } else {
            InputMode::Pheme
        };
        config.input.path = path.to_string_lossy().into_owned();
    }
    if let Some(seed) = cli.seed {
        config.synth.seed = seed;
        config.minhash.seed = seed;
        config.embedding.seed = seed;
        config.gcn.seed = seed;
        config.eval.seed = seed;
    }
    if let Some(file) = &cli.embedding_file {
        config.embedding.mode = EmbeddingMode::File;
        config.embedding.file = file.to_string_lossy().into_owned();
    }
    if let Some(threshold) = cli.threshold {
        config.minhash.threshold = threshold;
    }
    if let Some(k) = cli.k {
        config.eval.k = k;
    }
    if let Some(epochs) = cli.epochs {
        config.gcn.epochs = epochs;
    }
    if let Some(ablation) = cli.ablation {
        config.eval.ablation = ablation.into();
    }
    if let Some(weighted) = cli.weighted_adjacency {
        config.eval.weighted_adjacency = weighted;
    }
    Ok(config)
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os("RUMORGRAPH_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let config = effective_config(cli)?;
    let out = out_dir(cli);
    std::fs::create_dir_all(&out)?;
    // every command records the config it actually ran with
    std::fs::write(out.join(CONFIG_ECHO_FILE), config.to_toml_string())?;
    match cli.command {
        Command::Synth => pipeline::stage_synth(&config, &out)?,
        Command::Ingest => {
            let report = pipeline::stage_ingest(&config, &out)?;
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            println!(
                "parsed {} threads ({} skipped, {} replies skipped, {} defaulted fields)",
                report.parsed_threads,
                report.skipped_threads,
                report.skipped_replies,
                report.defaulted_fields
            );
        }
        Command::Label => pipeline::stage_label(&config, &out)?,
        Command::BuildGraph => pipeline::stage_build_graph(&config, &out)?,
        Command::Featurize => pipeline::stage_featurize(&config, &out)?,
        Command::Train => pipeline::stage_train(&config, &out)?,
        Command::Evaluate => pipeline::stage_evaluate(&config, &out)?,
        Command::Report => pipeline::stage_report(&config, &out)?,
        Command::RunAll => pipeline::run_all(&config, &out)?,
    }
    println!("{}: ok ({})", cli.command.name(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}: {err}", cli.command.name());
            ExitCode::FAILURE
        }
    }
}

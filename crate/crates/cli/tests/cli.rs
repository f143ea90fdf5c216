//! End-to-end checks through the real binary: stage ordering errors,
//! idempotent reruns, and byte-identical artifacts under a fixed seed.

use std::path::Path;
use std::process::Command;

fn rumorgraph() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rumorgraph"))
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

const FAST_CONFIG: &str = r#"
[synth]
n_initiators = 30
homophily = 0.7
seed = 11

[embedding]
dimension = 6

[gcn]
hidden_channels = 6
epochs = 10

[eval]
permutations = 25
"#;

fn write_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("fast.toml");
    std::fs::write(&path, FAST_CONFIG).unwrap();
    path
}

#[test]
fn train_before_featurize_names_the_missing_stage() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let out = dir.path().join("out");

    let status = rumorgraph()
        .args(["synth", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let output = rumorgraph()
        .args(["train", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.starts_with("train:"), "stderr: {stderr}");
    assert!(stderr.contains("label"), "stderr: {stderr}");
}

#[test]
fn run_all_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());

    let mut snapshots = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("out{run}"));
        let status = rumorgraph()
            .args(["run-all", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let artifacts: Vec<Vec<u8>> = [
            "metrics.csv",
            "roc_gcn.csv",
            "roc_mlp.csv",
            "model_gcn.json",
            "model_mlp.json",
            "loss_gcn.csv",
            "loss_mlp.csv",
            "config.toml",
        ]
        .iter()
        .map(|name| read(&out, name))
        .collect();
        snapshots.push(artifacts);
    }
    assert_eq!(snapshots[0], snapshots[1]);
}

#[test]
fn rerun_in_place_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let out = dir.path().join("out");

    for _ in 0..2 {
        let status = rumorgraph()
            .args(["run-all", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    // a second in-place run leaves the metrics untouched
    let first = read(&out, "metrics.csv");
    let status = rumorgraph()
        .args(["run-all", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(first, read(&out, "metrics.csv"));
}

#[test]
fn pheme_layout_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let incident = dir.path().join("pheme").join("testincident");
    let tweet = |user: &str, text: &str| {
        format!(
            r#"{{"text":"{text}","user":{{"id_str":"{user}","followers_count":9,"favourites_count":4,"verified":false}}}}"#
        )
    };
    // a handful of threads per label so stratified folds have members
    for (label_dir, label_idx) in [("rumours", 0), ("non-rumours", 1)] {
        for t in 0..8 {
            let thread = incident.join(label_dir).join(format!("t{label_idx}{t}"));
            std::fs::create_dir_all(thread.join("source-tweets")).unwrap();
            std::fs::create_dir_all(thread.join("reactions")).unwrap();
            let text = format!("topic{label_idx} item{t} detail{t} more{t}");
            std::fs::write(
                thread.join("source-tweets").join(format!("t{label_idx}{t}.json")),
                tweet(&format!("init{label_idx}{t}"), &text),
            )
            .unwrap();
            for r in 0..3 {
                // echo replies keep the labeling deterministic
                std::fs::write(
                    thread.join("reactions").join(format!("r{r}.json")),
                    tweet(&format!("rep{label_idx}{r}"), &text),
                )
                .unwrap();
            }
        }
    }
    let config = dir.path().join("pheme.toml");
    std::fs::write(
        &config,
        "[embedding]\ndimension = 6\n\n[gcn]\nhidden_channels = 6\nepochs = 8\n\n[eval]\npermutations = 20\nk = 3\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let output = rumorgraph()
        .args(["run-all", "--config"])
        .arg(&config)
        .arg("--input")
        .arg(dir.path().join("pheme"))
        .args(["--incident", "testincident", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let metrics = String::from_utf8(read(&out, "metrics.csv")).unwrap();
    assert!(metrics.lines().count() > 1);
    let label_report = String::from_utf8(read(&out, "label_report.csv")).unwrap();
    assert!(
        label_report.lines().nth(1).unwrap().starts_with("testincident,8,8,"),
        "report: {label_report}"
    );
}

#[test]
fn flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let out = dir.path().join("out");
    let status = rumorgraph()
        .args(["synth", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--seed", "99", "--epochs", "3", "--ablation", "gcn"])
        .status()
        .unwrap();
    assert!(status.success());
    let echoed = String::from_utf8(read(&out, "config.toml")).unwrap();
    assert!(echoed.contains("epochs = 3"), "echo: {echoed}");
    assert!(echoed.contains("seed = 99"), "echo: {echoed}");
    assert!(echoed.contains("ablation = \"gcn\""), "echo: {echoed}");
}

//! Corpus ingestion: PHEME-style directory trees of tweet threads and a
//! simplified JSONL fixture format, both parsed into typed records.
//!
//! PHEME layout assumed on disk:
//! `<incident>/{rumours,non-rumours}/<thread-id>/source-tweets/*.json`
//! plus `reactions/*.json`; the rumor label comes from the parent folder.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RumorLabel {
    Rumor,
    NonRumor,
}

impl RumorLabel {
    pub fn opposite(self) -> RumorLabel {
        match self {
            RumorLabel::Rumor => RumorLabel::NonRumor,
            RumorLabel::NonRumor => RumorLabel::Rumor,
        }
    }

    pub fn is_rumor(self) -> bool {
        matches!(self, RumorLabel::Rumor)
    }
}

/// One reply to an initiator tweet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplyRecord {
    pub reply_user_id: String,
    pub reply_text: String,
    pub reply_followers_count: u64,
    pub reply_favorites_count: u64,
    pub reply_verified: bool,
}

/// One initiator tweet together with its replies and ground-truth label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub initiator_user_id: String,
    pub tweet_text: String,
    pub followers_count: u64,
    pub favorites_count: u64,
    pub verified: bool,
    pub replies: Vec<ReplyRecord>,
    pub rumor_label: RumorLabel,
}

/// A parsed incident: a non-empty list of tweet threads.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidentCorpus {
    pub incident_name: String,
    pub records: Vec<TweetRecord>,
}

/// Parse bookkeeping for a PHEME load: what was skipped and why.
#[derive(Debug, Default, Clone)]
pub struct IngestReport {
    pub parsed_threads: usize,
    pub skipped_threads: usize,
    pub skipped_replies: usize,
    pub defaulted_fields: usize,
    pub warnings: Vec<String>,
}

/// Aggregate corpus counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub rumor_tweets: usize,
    pub nonrumor_tweets: usize,
    pub unique_users: usize,
    pub replies: usize,
}

// ---------------------------------------------------------------------
// JSONL fixture format
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct JsonlReply {
    user_id: String,
    text: String,
    followers: u64,
    favorites: u64,
    verified: bool,
}

#[derive(Serialize, Deserialize)]
struct JsonlRecord {
    user_id: String,
    text: String,
    followers: u64,
    favorites: u64,
    verified: bool,
    label: RumorLabel,
    replies: Vec<JsonlReply>,
}

impl From<&TweetRecord> for JsonlRecord {
    fn from(r: &TweetRecord) -> Self {
        JsonlRecord {
            user_id: r.initiator_user_id.clone(),
            text: r.tweet_text.clone(),
            followers: r.followers_count,
            favorites: r.favorites_count,
            verified: r.verified,
            label: r.rumor_label,
            replies: r
                .replies
                .iter()
                .map(|p| JsonlReply {
                    user_id: p.reply_user_id.clone(),
                    text: p.reply_text.clone(),
                    followers: p.reply_followers_count,
                    favorites: p.reply_favorites_count,
                    verified: p.reply_verified,
                })
                .collect(),
        }
    }
}

/// Loads the newline-delimited JSON fixture format. Blank lines are
/// ignored; any schema violation reports the offending line.
pub fn load_jsonl(path: &Path) -> Result<IncidentCorpus> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: JsonlRecord = serde_json::from_str(&line)
            .map_err(|e| Error::parse(path, idx + 1, e.to_string()))?;
        if raw.user_id.is_empty() {
            return Err(Error::parse(path, idx + 1, "user_id must be non-empty"));
        }
        for reply in &raw.replies {
            if reply.user_id.is_empty() {
                return Err(Error::parse(
                    path,
                    idx + 1,
                    "replies[].user_id must be non-empty",
                ));
            }
        }
        records.push(TweetRecord {
            initiator_user_id: raw.user_id,
            tweet_text: raw.text,
            followers_count: raw.followers,
            favorites_count: raw.favorites,
            verified: raw.verified,
            replies: raw
                .replies
                .into_iter()
                .map(|p| ReplyRecord {
                    reply_user_id: p.user_id,
                    reply_text: p.text,
                    reply_followers_count: p.followers,
                    reply_favorites_count: p.favorites,
                    reply_verified: p.verified,
                })
                .collect(),
            rumor_label: raw.label,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyCorpus(path.to_path_buf()));
    }
    let incident_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string());
    Ok(IncidentCorpus {
        incident_name,
        records,
    })
}

/// Re-emits a corpus in the JSONL fixture format.
pub fn write_jsonl(corpus: &IncidentCorpus, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    for record in &corpus.records {
        let raw = JsonlRecord::from(record);
        serde_json::to_writer(&mut out, &raw).expect("in-memory serialization");
        out.push(b'\n');
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&out).map_err(|e| Error::io(path, e))
}

// ---------------------------------------------------------------------
// PHEME directory format
// ---------------------------------------------------------------------

/// Best-effort extraction from a Twitter-API-shaped JSON object. Missing
/// numeric metadata defaults to 0 and `verified` to false; those defaults
/// are tallied by the caller.
struct ParsedTweet {
    user_id: String,
    text: String,
    followers: u64,
    favorites: u64,
    verified: bool,
    defaulted: bool,
}

fn parse_tweet_json(value: &serde_json::Value) -> Option<ParsedTweet> {
    let user = value.get("user")?;
    let user_id = match user.get("id_str") {
        Some(serde_json::Value::String(s)) if !s.is_empty() => s.clone(),
        _ => match user.get("id") {
            Some(serde_json::Value::Number(n)) => n.to_string(),
            _ => return None,
        },
    };
    let text = value
        .get("text")
        .or_else(|| value.get("full_text"))?
        .as_str()?
        .to_string();
    if text.is_empty() {
        return None;
    }
    let mut defaulted = false;
    let mut grab = |key: &str| -> u64 {
        match user.get(key).and_then(|v| v.as_u64()) {
            Some(n) => n,
            None => {
                defaulted = true;
                0
            }
        }
    };
    let followers = grab("followers_count");
    let favorites = grab("favourites_count");
    let verified = match user.get("verified").and_then(|v| v.as_bool()) {
        Some(b) => b,
        None => {
            defaulted = true;
            false
        }
    };
    Some(ParsedTweet {
        user_id,
        text,
        followers,
        favorites,
        verified,
        defaulted,
    })
}

fn read_json_file(path: &Path) -> Result<serde_json::Value> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::parse(path, e.line(), e.to_string()))
}

fn sorted_json_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut files: Vec<_> = walkdir::WalkDir::new(dir)
        .min_depth(1)
        .max_depth(1)
        .into_iter()
        .filter_map(|e| e.ok())
        .map(|e| e.into_path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

/// Parses one thread directory into a record, or records why it was
/// skipped.
fn parse_thread(
    thread_dir: &Path,
    label: RumorLabel,
    report: &mut IngestReport,
) -> Option<TweetRecord> {
    let source_dir = thread_dir.join("source-tweets");
    let sources = sorted_json_files(&source_dir);
    let Some(source_path) = sources.first() else {
        report.skipped_threads += 1;
        report
            .warnings
            .push(format!("{}: no source tweet", thread_dir.display()));
        return None;
    };
    let value = match read_json_file(source_path) {
        Ok(v) => v,
        Err(e) => {
            report.skipped_threads += 1;
            report.warnings.push(format!("skipped: {e}"));
            return None;
        }
    };
    let Some(source) = parse_tweet_json(&value) else {
        report.skipped_threads += 1;
        report.warnings.push(format!(
            "{}: missing mandatory fields",
            source_path.display()
        ));
        return None;
    };
    if source.defaulted {
        report.defaulted_fields += 1;
    }

    let mut replies = Vec::new();
    for reaction_path in sorted_json_files(&thread_dir.join("reactions")) {
        let value = match read_json_file(&reaction_path) {
            Ok(v) => v,
            Err(e) => {
                report.skipped_replies += 1;
                report.warnings.push(format!("skipped reply: {e}"));
                continue;
            }
        };
        match parse_tweet_json(&value) {
            Some(reply) => {
                if reply.defaulted {
                    report.defaulted_fields += 1;
                }
                replies.push(ReplyRecord {
                    reply_user_id: reply.user_id,
                    reply_text: reply.text,
                    reply_followers_count: reply.followers,
                    reply_favorites_count: reply.favorites,
                    reply_verified: reply.verified,
                });
            }
            None => {
                report.skipped_replies += 1;
                report.warnings.push(format!(
                    "{}: missing mandatory fields",
                    reaction_path.display()
                ));
            }
        }
    }

    report.parsed_threads += 1;
    Some(TweetRecord {
        initiator_user_id: source.user_id,
        tweet_text: source.text,
        followers_count: source.followers,
        favorites_count: source.favorites,
        verified: source.verified,
        replies,
        rumor_label: label,
    })
}

/// Loads one PHEME incident directory. Thread parsing is independent per
/// directory; results merge deterministically by sorted thread id, with
/// duplicate thread ids resolved last-wins (warned).
pub fn load_pheme_incident(path: &Path) -> Result<(IncidentCorpus, IngestReport)> {
    if !path.is_dir() {
        return Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "incident directory not found"),
        ));
    }
    let mut report = IngestReport::default();
    // thread id -> (label, dir); BTreeMap gives the sorted, last-wins merge
    let mut threads: BTreeMap<String, (RumorLabel, std::path::PathBuf)> = BTreeMap::new();
    for (subdir, label) in [
        ("rumours", RumorLabel::Rumor),
        ("non-rumours", RumorLabel::NonRumor),
    ] {
        let label_dir = path.join(subdir);
        if !label_dir.is_dir() {
            continue;
        }
        let mut entries: Vec<_> = fs::read_dir(&label_dir)
            .map_err(|e| Error::io(&label_dir, e))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_dir())
            .collect();
        entries.sort();
        for dir in entries {
            let id = dir
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            if let Some((_, previous)) = threads.get(&id) {
                report.warnings.push(format!(
                    "duplicate thread id {id}: {} replaced by {}",
                    previous.display(),
                    dir.display()
                ));
            }
            threads.insert(id, (label, dir));
        }
    }

    let mut records = Vec::new();
    for (label, dir) in threads.values() {
        if let Some(record) = parse_thread(dir, *label, &mut report) {
            records.push(record);
        }
    }
    if records.is_empty() {
        return Err(Error::EmptyCorpus(path.to_path_buf()));
    }
    let incident_name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "incident".to_string());
    Ok((
        IncidentCorpus {
            incident_name,
            records,
        },
        report,
    ))
}

/// Counts rumor/non-rumor tweets, unique users (initiators and repliers),
/// and total replies.
pub fn corpus_stats(corpus: &IncidentCorpus) -> CorpusStats {
    let mut users = std::collections::HashSet::new();
    let mut rumor = 0;
    let mut replies = 0;
    for record in &corpus.records {
        if record.rumor_label.is_rumor() {
            rumor += 1;
        }
        users.insert(record.initiator_user_id.as_str());
        for reply in &record.replies {
            users.insert(reply.reply_user_id.as_str());
            replies += 1;
        }
    }
    CorpusStats {
        rumor_tweets: rumor,
        nonrumor_tweets: corpus.records.len() - rumor,
        unique_users: users.len(),
        replies,
    }
}

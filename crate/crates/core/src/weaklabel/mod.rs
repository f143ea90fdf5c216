//! Weak-supervised transformation of the tweet corpus into a per-user
//! rumor-spreader dataset: MinHash reply labeling, intensity scoring,
//! and class binarization.

pub mod minhash;
pub mod sentiment;

pub use minhash::{
    estimate_similarity, exact_jaccard, minhash_signature, MinHashParams, MinHashSignature,
};
pub use sentiment::{sentiment, sentiment_report, SentimentClass, SentimentReport, SentimentScore};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{IncidentCorpus, RumorLabel};
use crate::textprep::clean_and_tokenize;

pub const DEFAULT_SIMILARITY_THRESHOLD: f64 = 0.85;

/// Weak labels for every reply, parallel to `corpus.records[i].replies`.
pub type ReplyLabels = Vec<Vec<RumorLabel>>;

/// Labels each reply by MinHash similarity to its own thread's initiator
/// tweet: similarity >= threshold takes the initiator's label, anything
/// else the opposite label. The threshold is inclusive.
pub fn label_replies(
    corpus: &IncidentCorpus,
    params: MinHashParams,
    threshold: f64,
) -> Result<ReplyLabels> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidInput(format!(
            "similarity threshold {threshold} outside [0, 1]"
        )));
    }
    corpus
        .records
        .par_iter()
        .map(|record| {
            let initiator_tokens = clean_and_tokenize(&record.tweet_text);
            let initiator_sig = minhash_signature(&initiator_tokens, params);
            record
                .replies
                .iter()
                .map(|reply| {
                    let reply_tokens = clean_and_tokenize(&reply.reply_text);
                    let reply_sig = minhash_signature(&reply_tokens, params);
                    let similarity = estimate_similarity(&initiator_sig, &reply_sig)?;
                    Ok(if similarity >= threshold {
                        record.rumor_label
                    } else {
                        record.rumor_label.opposite()
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Fraction of rumor labels in a user's history: how often the user
/// tweets rumors out of everything they tweet.
pub fn intensity_score(labels: &[RumorLabel]) -> Result<f64> {
    if labels.is_empty() {
        return Err(Error::InvalidInput(
            "intensity score undefined for an empty label history".into(),
        ));
    }
    let rumor = labels.iter().filter(|l| l.is_rumor()).count();
    Ok(rumor as f64 / labels.len() as f64)
}

/// Class threshold rule: scores below 0.5 are non-spreaders (0),
/// everything else is a possible spreader (1).
pub fn binarize(score: f64) -> Result<u8> {
    if !(0.0..=1.0).contains(&score) {
        return Err(Error::InvalidInput(format!(
            "intensity score {score} outside [0, 1]"
        )));
    }
    Ok(u8::from(score >= 0.5))
}

/// One user with their full label history and derived class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    pub tweet_labels: Vec<RumorLabel>,
    pub intensity_score: f64,
    pub spreader_class: u8,
    pub followers_count: u64,
    pub favorites_count: u64,
    pub verified: bool,
}

#[derive(Default)]
struct ProfileAccumulator {
    labels: Vec<RumorLabel>,
    followers: u64,
    favorites: u64,
    verified: bool,
}

/// Aggregates one profile per unique user: initiators contribute their
/// tweet's ground-truth label, repliers the weak label of each reply.
/// Metadata conflicts across records resolve to the maximum counts and
/// logical-or of `verified`. Output is sorted by user id.
pub fn build_user_profiles(
    corpus: &IncidentCorpus,
    reply_labels: &ReplyLabels,
) -> Result<Vec<UserProfile>> {
    if reply_labels.len() != corpus.records.len() {
        return Err(Error::InvalidInput(format!(
            "reply labels cover {} records, corpus has {}",
            reply_labels.len(),
            corpus.records.len()
        )));
    }
    let mut acc: BTreeMap<String, ProfileAccumulator> = BTreeMap::new();
    for (record, labels) in corpus.records.iter().zip(reply_labels) {
        if labels.len() != record.replies.len() {
            return Err(Error::InvalidInput(format!(
                "record by {} has {} replies but {} labels",
                record.initiator_user_id,
                record.replies.len(),
                labels.len()
            )));
        }
        let entry = acc.entry(record.initiator_user_id.clone()).or_default();
        entry.labels.push(record.rumor_label);
        entry.followers = entry.followers.max(record.followers_count);
        entry.favorites = entry.favorites.max(record.favorites_count);
        entry.verified |= record.verified;
        for (reply, label) in record.replies.iter().zip(labels) {
            let entry = acc.entry(reply.reply_user_id.clone()).or_default();
            entry.labels.push(*label);
            entry.followers = entry.followers.max(reply.reply_followers_count);
            entry.favorites = entry.favorites.max(reply.reply_favorites_count);
            entry.verified |= reply.reply_verified;
        }
    }
    acc.into_iter()
        .map(|(user_id, a)| {
            let score = intensity_score(&a.labels)?;
            Ok(UserProfile {
                user_id,
                intensity_score: score,
                spreader_class: binarize(score)?,
                tweet_labels: a.labels,
                followers_count: a.followers,
                favorites_count: a.favorites,
                verified: a.verified,
            })
        })
        .collect()
}

/// Per-incident class counts, mirroring the tweet/spreader distribution
/// table emitted as `label_report.csv`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelReport {
    pub incident: String,
    pub rumor_tweets: usize,
    pub nonrumor_tweets: usize,
    pub rumor_spreaders: usize,
    pub nonrumor_spreaders: usize,
}

pub fn label_report(corpus: &IncidentCorpus, profiles: &[UserProfile]) -> LabelReport {
    let stats = crate::ingest::corpus_stats(corpus);
    let spreaders = profiles.iter().filter(|p| p.spreader_class == 1).count();
    LabelReport {
        incident: corpus.incident_name.clone(),
        rumor_tweets: stats.rumor_tweets,
        nonrumor_tweets: stats.nonrumor_tweets,
        rumor_spreaders: spreaders,
        nonrumor_spreaders: profiles.len() - spreaders,
    }
}

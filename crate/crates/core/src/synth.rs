//! Deterministic synthetic corpus generator with planted spreader ground
//! truth. Every user belongs to a rumor or non-rumor community; replies
//! follow the initiator's community with probability `homophily`
//! (near-copied text that earns the same label) and otherwise come from
//! the opposite community with fresh text (earning the opposite label).
//! At homophily 1.0 the copies are verbatim, so MinHash labeling recovers
//! the plant exactly and every intensity score is 0 or 1.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ingest::{IncidentCorpus, ReplyRecord, RumorLabel, TweetRecord};
use crate::splitmix64;

#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub n_initiators: usize,
    /// Inclusive range of replies drawn per initiator tweet.
    pub replies_per_tweet: (usize, usize),
    /// Fraction of initiator tweets labeled rumor.
    pub rumor_fraction: f64,
    /// Probability a reply follows the initiator's community.
    pub homophily: f64,
    pub vocab_size: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n_initiators: 200,
            replies_per_tweet: (1, 4),
            rumor_fraction: 0.3,
            homophily: 0.8,
            vocab_size: 400,
            seed: 42,
        }
    }
}

/// What the generator planted, keyed by user id.
#[derive(Debug, Clone, Default)]
pub struct GroundTruth {
    /// Intended per-user label history, in corpus order.
    pub labels: BTreeMap<String, Vec<RumorLabel>>,
    /// Intended intensity score (rumor labels / total labels).
    pub intensity: BTreeMap<String, f64>,
    /// Intended spreader class under the 0.5 threshold rule.
    pub classes: BTreeMap<String, u8>,
}

fn word(i: usize) -> String {
    // digits keep these tokens clear of stemming and the stopword list
    format!("tok{i:04}")
}

fn random_text(rng: &mut ChaCha8Rng, vocab_size: usize) -> String {
    let len = rng.random_range(8..=14);
    (0..len)
        .map(|_| word(rng.random_range(0..vocab_size)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Near-copy used by aligned replies: identical text at homophily 1.0,
/// up to 10% of tokens dropped otherwise.
fn near_copy(rng: &mut ChaCha8Rng, text: &str, verbatim: bool) -> String {
    if verbatim {
        return text.to_string();
    }
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let max_drop = tokens.len() / 10;
    let n_drop = rng.random_range(0..=max_drop);
    let mut kept: Vec<&str> = tokens.clone();
    for _ in 0..n_drop {
        if kept.len() > 1 {
            let at = rng.random_range(0..kept.len());
            kept.remove(at);
        }
    }
    kept.join(" ")
}

fn metadata(rng: &mut ChaCha8Rng) -> (u64, u64, bool) {
    let followers = rng.random_range(0..5000);
    let favorites = rng.random_range(0..2000);
    let verified = rng.random_range(0..100) < 5;
    (followers, favorites, verified)
}

/// Generates a corpus plus its planted ground truth. Deterministic in the
/// seed: each initiator derives its own RNG stream, so generation order
/// cannot leak between threads.
pub fn generate(spec: &SynthSpec) -> (IncidentCorpus, GroundTruth) {
    assert!(spec.n_initiators > 0, "n_initiators must be positive");
    assert!(
        spec.replies_per_tweet.0 <= spec.replies_per_tweet.1,
        "replies_per_tweet range is empty"
    );
    assert!((0.0..=1.0).contains(&spec.rumor_fraction));
    assert!((0.0..=1.0).contains(&spec.homophily));
    assert!(spec.vocab_size > 0);

    let pool_size = (spec.n_initiators / 2).max(2);
    let rumor_pool: Vec<String> = (0..pool_size).map(|i| format!("r{i:05}")).collect();
    let nonrumor_pool: Vec<String> = (0..pool_size).map(|i| format!("n{i:05}")).collect();

    let mut records = Vec::with_capacity(spec.n_initiators);
    let mut truth = GroundTruth::default();
    let mut replier_meta: BTreeMap<String, (u64, u64, bool)> = BTreeMap::new();

    for idx in 0..spec.n_initiators {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(spec.seed ^ (idx as u64)));
        let label = if rng.random_range(0.0..1.0) < spec.rumor_fraction {
            RumorLabel::Rumor
        } else {
            RumorLabel::NonRumor
        };
        let initiator = format!("i{idx:05}");
        let text = random_text(&mut rng, spec.vocab_size);
        let (followers, favorites, verified) = metadata(&mut rng);

        truth
            .labels
            .entry(initiator.clone())
            .or_default()
            .push(label);

        let n_replies = rng.random_range(spec.replies_per_tweet.0..=spec.replies_per_tweet.1);
        let mut replies = Vec::with_capacity(n_replies);
        for _ in 0..n_replies {
            let aligned = rng.random_range(0.0..1.0) < spec.homophily;
            let (pool, reply_label, reply_text) = if aligned {
                let pool = match label {
                    RumorLabel::Rumor => &rumor_pool,
                    RumorLabel::NonRumor => &nonrumor_pool,
                };
                let text = near_copy(&mut rng, &text, spec.homophily >= 1.0);
                (pool, label, text)
            } else {
                let pool = match label {
                    RumorLabel::Rumor => &nonrumor_pool,
                    RumorLabel::NonRumor => &rumor_pool,
                };
                let text = random_text(&mut rng, spec.vocab_size);
                (pool, label.opposite(), text)
            };
            let replier = pool[rng.random_range(0..pool.len())].clone();
            let (rf, rv, rb) = *replier_meta
                .entry(replier.clone())
                .or_insert_with(|| metadata(&mut rng));
            truth
                .labels
                .entry(replier.clone())
                .or_default()
                .push(reply_label);
            replies.push(ReplyRecord {
                reply_user_id: replier,
                reply_text,
                reply_followers_count: rf,
                reply_favorites_count: rv,
                reply_verified: rb,
            });
        }

        records.push(TweetRecord {
            initiator_user_id: initiator,
            tweet_text: text,
            followers_count: followers,
            favorites_count: favorites,
            verified,
            replies,
            rumor_label: label,
        });
    }

    for (user, labels) in &truth.labels {
        let rumor = labels.iter().filter(|l| l.is_rumor()).count();
        let score = rumor as f64 / labels.len() as f64;
        truth.intensity.insert(user.clone(), score);
        truth
            .classes
            .insert(user.clone(), if score < 0.5 { 0 } else { 1 });
    }

    (
        IncidentCorpus {
            incident_name: format!("synthetic-{}", spec.seed),
            records,
        },
        truth,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::corpus_stats;

    #[test]
    fn same_seed_is_identical() {
        let spec = SynthSpec::default();
        let (a, _) = generate(&spec);
        let (b, _) = generate(&spec);
        assert_eq!(a, b);
    }

    #[test]
    fn rumor_fraction_concentrates() {
        let spec = SynthSpec {
            n_initiators: 2000,
            rumor_fraction: 0.22,
            seed: 7,
            ..SynthSpec::default()
        };
        let (corpus, _) = generate(&spec);
        let stats = corpus_stats(&corpus);
        let fraction = stats.rumor_tweets as f64 / corpus.records.len() as f64;
        assert!(
            (fraction - 0.22).abs() <= 0.02,
            "rumor fraction {fraction} drifted from 0.22"
        );
    }

    #[test]
    fn full_homophily_plants_pure_intensities() {
        let spec = SynthSpec {
            n_initiators: 300,
            homophily: 1.0,
            seed: 11,
            ..SynthSpec::default()
        };
        let (_, truth) = generate(&spec);
        for (user, score) in &truth.intensity {
            assert!(
                *score == 0.0 || *score == 1.0,
                "{user} has mixed intensity {score} at homophily 1.0"
            );
        }
    }

    #[test]
    fn truth_tallies_match_generator_counts() {
        let spec = SynthSpec {
            n_initiators: 150,
            homophily: 0.5,
            seed: 3,
            ..SynthSpec::default()
        };
        let (corpus, truth) = generate(&spec);
        let stats = corpus_stats(&corpus);
        assert_eq!(truth.labels.len(), stats.unique_users);
        let total_labels: usize = truth.labels.values().map(|v| v.len()).sum();
        assert_eq!(total_labels, corpus.records.len() + stats.replies);
        for (user, labels) in &truth.labels {
            let expected = labels.iter().filter(|l| l.is_rumor()).count() as f64
                / labels.len() as f64;
            assert_eq!(truth.intensity[user], expected);
            assert_eq!(truth.classes[user], u8::from(expected >= 0.5));
        }
    }

    #[test]
    fn verbatim_copies_at_full_homophily() {
        let spec = SynthSpec {
            n_initiators: 40,
            homophily: 1.0,
            seed: 5,
            ..SynthSpec::default()
        };
        let (corpus, _) = generate(&spec);
        for record in &corpus.records {
            for reply in &record.replies {
                assert_eq!(reply.reply_text, record.tweet_text);
            }
        }
    }
}

//! Lexicon-based sentiment scoring for the reply-tweet report. Matched
//! terms carry unit weight; a negation within the two preceding tokens
//! flips the sign. Deliberately simpler than a full polarity model: the
//! report is descriptive and never feeds the labeling step.

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::Serialize;

use crate::ingest::{IncidentCorpus, RumorLabel};

static POSITIVE_RAW: &str = include_str!("../../assets/sentiment_positive.txt");
static NEGATIVE_RAW: &str = include_str!("../../assets/sentiment_negative.txt");

const NEGATIONS: &[&str] = &[
    "not", "no", "never", "nor", "neither", "cannot", "cant", "dont", "didnt", "doesnt", "isnt",
    "wasnt", "arent", "werent", "wont", "wouldnt", "couldnt", "shouldnt", "aint", "without",
];

fn positive_words() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| POSITIVE_RAW.lines().filter(|l| !l.is_empty()).collect())
}

fn negative_words() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| NEGATIVE_RAW.lines().filter(|l| !l.is_empty()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SentimentClass {
    Positive,
    Negative,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentimentScore {
    /// Mean signed value of matched terms, in [-1, 1].
    pub polarity: f64,
    pub class: SentimentClass,
}

/// Sentiment tokenizer: keeps negation words (no stopword removal, no
/// stemming) and collapses apostrophes so "don't" matches "dont".
fn sentiment_tokens(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in lowered.chars() {
        if ch.is_ascii_alphanumeric() {
            current.push(ch);
        } else if ch == '\'' || ch == '\u{2019}' {
            // collapse apostrophes inside words
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Scores a text. Empty or lexicon-free input is neutral with polarity 0.
pub fn sentiment(text: &str) -> SentimentScore {
    let tokens = sentiment_tokens(text);
    let mut total = 0.0;
    let mut matched = 0usize;
    for (i, token) in tokens.iter().enumerate() {
        let base = if positive_words().contains(token.as_str()) {
            1.0
        } else if negative_words().contains(token.as_str()) {
            -1.0
        } else {
            continue;
        };
        let negated = tokens[i.saturating_sub(2)..i]
            .iter()
            .any(|t| NEGATIONS.contains(&t.as_str()));
        total += if negated { -base } else { base };
        matched += 1;
    }
    if matched == 0 {
        return SentimentScore {
            polarity: 0.0,
            class: SentimentClass::Neutral,
        };
    }
    let polarity = total / matched as f64;
    let class = if polarity > 0.0 {
        SentimentClass::Positive
    } else if polarity < 0.0 {
        SentimentClass::Negative
    } else {
        SentimentClass::Neutral
    };
    SentimentScore { polarity, class }
}

/// One category row of the reply-sentiment report. Percentages are over
/// non-neutral replies only, so they sum to 100 within the row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentimentRow {
    pub category: RumorLabel,
    pub positive: usize,
    pub negative: usize,
    pub neutral_excluded: usize,
    pub positive_pct: f64,
    pub negative_pct: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SentimentReport {
    pub rows: Vec<SentimentRow>,
}

/// Tallies reply sentiment per initiator ground-truth category. A reply
/// counts under the rumor category when its initiator's tweet is a rumor.
/// Categories with no non-neutral replies are omitted entirely.
pub fn sentiment_report(corpus: &IncidentCorpus) -> SentimentReport {
    let mut counts = [[0usize; 3]; 2]; // [category][pos, neg, neutral]
    for record in &corpus.records {
        let cat = usize::from(!record.rumor_label.is_rumor());
        for reply in &record.replies {
            match sentiment(&reply.reply_text).class {
                SentimentClass::Positive => counts[cat][0] += 1,
                SentimentClass::Negative => counts[cat][1] += 1,
                SentimentClass::Neutral => counts[cat][2] += 1,
            }
        }
    }
    let mut rows = Vec::new();
    for (cat, label) in [(0, RumorLabel::Rumor), (1, RumorLabel::NonRumor)] {
        let [pos, neg, neutral] = counts[cat];
        let scored = pos + neg;
        if scored == 0 {
            continue;
        }
        rows.push(SentimentRow {
            category: label,
            positive: pos,
            negative: neg,
            neutral_excluded: neutral,
            positive_pct: 100.0 * pos as f64 / scored as f64,
            negative_pct: 100.0 * neg as f64 / scored as f64,
        });
    }
    SentimentReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{ReplyRecord, TweetRecord};

    #[test]
    fn empty_text_is_neutral() {
        let s = sentiment("");
        assert_eq!(s.polarity, 0.0);
        assert_eq!(s.class, SentimentClass::Neutral);
    }

    #[test]
    fn lexicon_hit_is_positive() {
        let s = sentiment("good");
        assert!(s.polarity > 0.0);
        assert_eq!(s.class, SentimentClass::Positive);
    }

    #[test]
    fn negation_flips_sign() {
        let s = sentiment("not good");
        assert!(s.polarity < 0.0);
        assert_eq!(s.class, SentimentClass::Negative);

        let s = sentiment("this is not true at all");
        assert_eq!(s.class, SentimentClass::Negative);
    }

    #[test]
    fn negation_window_is_two_tokens() {
        assert_eq!(sentiment("not very good").class, SentimentClass::Negative);
        assert_eq!(
            sentiment("not saying anything good").class,
            SentimentClass::Positive
        );
    }

    #[test]
    fn apostrophes_collapse_for_negations() {
        assert_eq!(sentiment("don't trust this").class, SentimentClass::Negative);
    }

    #[test]
    fn mixed_terms_average() {
        let s = sentiment("good but terrible");
        assert_eq!(s.polarity, 0.0);
        assert_eq!(s.class, SentimentClass::Neutral);
    }

    fn record(label: RumorLabel, reply_texts: &[&str]) -> TweetRecord {
        TweetRecord {
            initiator_user_id: "init".into(),
            tweet_text: "tok0001 tok0002".into(),
            followers_count: 0,
            favorites_count: 0,
            verified: false,
            replies: reply_texts
                .iter()
                .enumerate()
                .map(|(i, t)| ReplyRecord {
                    reply_user_id: format!("u{i}"),
                    reply_text: t.to_string(),
                    reply_followers_count: 0,
                    reply_favorites_count: 0,
                    reply_verified: false,
                })
                .collect(),
            rumor_label: label,
        }
    }

    #[test]
    fn all_positive_nonrumor_replies_are_100_percent() {
        let corpus = IncidentCorpus {
            incident_name: "t".into(),
            records: vec![record(RumorLabel::NonRumor, &["good", "great news", "love it"])],
        };
        let report = sentiment_report(&corpus);
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.category, RumorLabel::NonRumor);
        assert_eq!(row.positive_pct, 100.0);
        assert_eq!(row.negative_pct, 0.0);
    }

    #[test]
    fn known_mix_recovered_and_neutral_excluded() {
        let corpus = IncidentCorpus {
            incident_name: "t".into(),
            records: vec![record(
                RumorLabel::Rumor,
                &["fake lie", "wrong", "good", "tok0001 tok0002"],
            )],
        };
        let report = sentiment_report(&corpus);
        let row = &report.rows[0];
        assert_eq!(row.category, RumorLabel::Rumor);
        assert_eq!((row.positive, row.negative, row.neutral_excluded), (1, 2, 1));
        assert!((row.positive_pct - 100.0 / 3.0).abs() < 1e-12);
        assert!((row.positive_pct + row.negative_pct - 100.0).abs() < 1e-12);
    }

    #[test]
    fn empty_reply_set_gives_empty_report() {
        let corpus = IncidentCorpus {
            incident_name: "t".into(),
            records: vec![record(RumorLabel::Rumor, &[])],
        };
        assert!(sentiment_report(&corpus).rows.is_empty());
    }
}

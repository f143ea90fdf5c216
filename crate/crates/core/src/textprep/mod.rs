//! Deterministic text cleaning: URL stripping, lowercasing, punctuation
//! removal, stopword filtering, Porter stemming, and noisy-word removal.

mod porter;

pub use porter::porter_stem;

use std::collections::HashSet;
use std::sync::OnceLock;

use regex::Regex;

static STOPWORDS_RAW: &str = include_str!("../../assets/stopwords_en.txt");
static VOCAB_RAW: &str = include_str!("../../assets/vocab_en.txt");

fn url_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\b(?:https?://|www\.)\S+").expect("static pattern"))
}

/// The bundled English stopword list, one lowercase word per line.
pub fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| STOPWORDS_RAW.lines().filter(|l| !l.is_empty()).collect())
}

/// The bundled English vocabulary used by the noisy-word filter.
pub fn english_vocabulary() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| VOCAB_RAW.lines().filter(|l| !l.is_empty()).collect())
}

/// Loads a word set from newline-delimited UTF-8 text.
pub fn word_set_from_str(text: &str) -> HashSet<String> {
    text.lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect()
}

/// Splits text into lowercase tokens: URLs removed first, `#`/`@` treated
/// as separators (the tagged word itself survives), every other character
/// outside `[a-z0-9_]` is a boundary. No stopword removal, no stemming.
pub fn raw_tokens(text: &str) -> Vec<String> {
    let stripped = url_pattern().replace_all(text, " ");
    let lowered = stripped.to_lowercase();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in lowered.chars() {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            current.push(ch);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn is_stopword(token: &str) -> bool {
    stopwords().contains(token)
}

/// Stems repeatedly until the token stops changing, so that re-running the
/// cleaning pipeline over its own output is a no-op. Single-pass Porter is
/// not a fixed point for every word (e.g. "agreed" -> "agre" -> "agr").
fn stem_to_fixpoint(token: &str) -> String {
    let mut current = token.to_string();
    for _ in 0..8 {
        let next = porter_stem(&current);
        if next == current {
            return current;
        }
        current = next;
    }
    current
}

fn is_alphabetic(token: &str) -> bool {
    token.bytes().all(|b| b.is_ascii_lowercase())
}

/// Full cleaning pipeline: tokenize, drop stopwords, stem alphabetic
/// tokens, then drop any stopwords produced by stemming.
pub fn clean_and_tokenize(text: &str) -> Vec<String> {
    raw_tokens(text)
        .into_iter()
        .filter(|t| !is_stopword(t))
        .map(|t| {
            if is_alphabetic(&t) {
                stem_to_fixpoint(&t)
            } else {
                t
            }
        })
        .filter(|t| !is_stopword(t))
        .collect()
}

fn has_repeated_letter_run(token: &str) -> bool {
    token
        .as_bytes()
        .windows(2)
        .any(|w| w[0] == w[1] && w[0].is_ascii_alphabetic())
}

/// Drops elongated junk like "aaand": tokens containing a repeated-letter
/// run that are absent from the vocabulary. Ordinary double-letter words
/// ("good") survive through the vocabulary lookup; digit runs are ignored.
pub fn filter_noise<S: AsRef<str>>(tokens: &[S], vocabulary: &HashSet<String>) -> Vec<String> {
    tokens
        .iter()
        .map(|t| t.as_ref())
        .filter(|t| !has_repeated_letter_run(t) || vocabulary.contains(*t))
        .map(|t| t.to_string())
        .collect()
}

/// [`filter_noise`] against the bundled English vocabulary.
pub fn filter_noise_bundled(tokens: &[String]) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| !has_repeated_letter_run(t) || english_vocabulary().contains(t.as_str()))
        .cloned()
        .collect()
}

/// Cleaning pipeline for text features: noisy words are removed before
/// stemming so the vocabulary lookup sees surface forms.
pub fn clean_tokenize_filtered(text: &str) -> Vec<String> {
    let raw = raw_tokens(text);
    filter_noise_bundled(&raw)
        .into_iter()
        .filter(|t| !is_stopword(t))
        .map(|t| {
            if is_alphabetic(&t) {
                stem_to_fixpoint(&t)
            } else {
                t
            }
        })
        .filter(|t| !is_stopword(t))
        .collect()
}

//! Node feature assembly: per-user text embeddings, the three user
//! metadata columns, and the ego-network `user_imp` column, standardized
//! per fold.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gcn::Mat;
use crate::ingest::IncidentCorpus;
use crate::textprep::clean_tokenize_filtered;
use crate::weaklabel::UserProfile;
use crate::{fnv1a64, splitmix64};

pub const DEFAULT_EMBEDDING_DIM: usize = 300;

/// Where word vectors come from. `HashRandom` derives a deterministic
/// unit-variance vector from each word's hash (every word is known);
/// `FileBacked` loads a word2vec-style text file and knows only the words
/// it lists.
#[derive(Debug, Clone)]
pub enum EmbeddingProvider {
    HashRandom { seed: u64, dimension: usize },
    FileBacked { dimension: usize, vectors: HashMap<String, Vec<f64>> },
}

impl EmbeddingProvider {
    pub fn hash_random(seed: u64, dimension: usize) -> EmbeddingProvider {
        EmbeddingProvider::HashRandom { seed, dimension }
    }

    /// Parses the text format `word v1 v2 ... vD`, with an optional
    /// `<count> <dim>` header line.
    pub fn from_file(path: &Path) -> Result<EmbeddingProvider> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut vectors: HashMap<String, Vec<f64>> = HashMap::new();
        let mut dimension = None;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let word = parts.next().expect("non-empty line has a first token");
            let values: Vec<f64> = parts
                .map(|p| {
                    p.parse::<f64>()
                        .map_err(|_| Error::parse(path, idx + 1, format!("bad float {p:?}")))
                })
                .collect::<Result<_>>()?;
            if idx == 0 && values.len() == 1 && word.parse::<usize>().is_ok() {
                // `<count> <dim>` header
                dimension = Some(values[0] as usize);
                continue;
            }
            match dimension {
                None => dimension = Some(values.len()),
                Some(d) if d != values.len() => {
                    return Err(Error::parse(
                        path,
                        idx + 1,
                        format!("expected {d} values, found {}", values.len()),
                    ));
                }
                _ => {}
            }
            vectors.insert(word.to_lowercase(), values);
        }
        let dimension = dimension
            .ok_or_else(|| Error::parse(path, 1, "embedding file holds no vectors"))?;
        if dimension == 0 {
            return Err(Error::parse(path, 1, "embedding dimension is zero"));
        }
        Ok(EmbeddingProvider::FileBacked { dimension, vectors })
    }

    pub fn dimension(&self) -> usize {
        match self {
            EmbeddingProvider::HashRandom { dimension, .. } => *dimension,
            EmbeddingProvider::FileBacked { dimension, .. } => *dimension,
        }
    }

    /// The vector for one word, if the provider knows it. Deterministic
    /// per word; uniform draws on [-sqrt(3), sqrt(3)] give unit variance.
    pub fn lookup(&self, word: &str) -> Option<Vec<f64>> {
        match self {
            EmbeddingProvider::HashRandom { seed, dimension } => {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ fnv1a64(word.as_bytes())));
                let limit = 3.0f64.sqrt();
                Some((0..*dimension).map(|_| rng.random_range(-limit..limit)).collect())
            }
            EmbeddingProvider::FileBacked { vectors, .. } => vectors.get(word).cloned(),
        }
    }
}

/// Mean of the vectors of the words the provider knows; the zero vector
/// when nothing matches or the token list is empty.
pub fn embed_text<S: AsRef<str>>(tokens: &[S], provider: &EmbeddingProvider) -> Vec<f64> {
    let dim = provider.dimension();
    let mut sum = vec![0.0; dim];
    let mut known = 0usize;
    for token in tokens {
        if let Some(v) = provider.lookup(token.as_ref()) {
            for (s, x) in sum.iter_mut().zip(&v) {
                *s += x;
            }
            known += 1;
        }
    }
    if known > 0 {
        for s in &mut sum {
            *s /= known as f64;
        }
    }
    sum
}

/// Every text a user authored: their initiated tweets plus the replies
/// they wrote, in corpus order.
pub fn user_texts(corpus: &IncidentCorpus) -> BTreeMap<String, Vec<String>> {
    let mut texts: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for record in &corpus.records {
        texts
            .entry(record.initiator_user_id.clone())
            .or_default()
            .push(record.tweet_text.clone());
        for reply in &record.replies {
            texts
                .entry(reply.reply_user_id.clone())
                .or_default()
                .push(reply.reply_text.clone());
        }
    }
    texts
}

/// One node vector per user: the mean of that user's per-tweet
/// embeddings (tweets are cleaned and noise-filtered first).
pub fn embed_users(
    corpus: &IncidentCorpus,
    provider: &EmbeddingProvider,
) -> BTreeMap<String, Vec<f64>> {
    use rayon::prelude::*;
    let texts = user_texts(corpus);
    let entries: Vec<(String, Vec<String>)> = texts.into_iter().collect();
    entries
        .into_par_iter()
        .map(|(user, tweets)| {
            let dim = provider.dimension();
            let mut mean = vec![0.0; dim];
            for tweet in &tweets {
                let tokens = clean_tokenize_filtered(tweet);
                let v = embed_text(&tokens, provider);
                for (m, x) in mean.iter_mut().zip(&v) {
                    *m += x;
                }
            }
            for m in &mut mean {
                *m /= tweets.len() as f64;
            }
            (user, mean)
        })
        .collect()
}

/// Replies received per initiating user (zero for everyone else appears
/// implicitly when consumed).
pub fn reply_counts(corpus: &IncidentCorpus) -> BTreeMap<String, u64> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for record in &corpus.records {
        *counts.entry(record.initiator_user_id.clone()).or_insert(0) +=
            record.replies.len() as u64;
        for reply in &record.replies {
            counts.entry(reply.reply_user_id.clone()).or_insert(0);
        }
    }
    counts
}

/// Each user's share of all replies received; all zeros when no reply
/// exists anywhere.
pub fn user_importance(reply_counts: &BTreeMap<String, u64>) -> BTreeMap<String, f64> {
    let total: u64 = reply_counts.values().sum();
    reply_counts
        .iter()
        .map(|(user, &count)| {
            let value = if total == 0 {
                0.0
            } else {
                count as f64 / total as f64
            };
            (user.clone(), value)
        })
        .collect()
}

/// The assembled node-feature matrix: row order matches `row_ids`, which
/// matches the graph's canonical node ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub row_ids: Vec<String>,
    pub column_names: Vec<String>,
    pub values: Mat,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.values.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.cols()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_names.iter().position(|c| c == name)?;
        Some((0..self.n_rows()).map(|i| self.values.get(i, j)).collect())
    }
}

/// Column layout: embedding 0..dim, then followers, favorites, verified
/// (0/1), user_imp. Profiles must be sorted by user id; every profile
/// needs an embedding and an importance value.
pub fn assemble(
    profiles: &[UserProfile],
    embeddings: &BTreeMap<String, Vec<f64>>,
    user_imp: &BTreeMap<String, f64>,
    dimension: usize,
) -> Result<FeatureMatrix> {
    let missing: Vec<&str> = profiles
        .iter()
        .map(|p| p.user_id.as_str())
        .filter(|id| !embeddings.contains_key(*id) || !user_imp.contains_key(*id))
        .collect();
    if !missing.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no embedding or importance value for users: {}",
            missing.join(", ")
        )));
    }
    let n = profiles.len();
    let cols = dimension + 4;
    let mut values = Mat::zeros(n, cols);
    let mut row_ids = Vec::with_capacity(n);
    for (i, profile) in profiles.iter().enumerate() {
        let embedding = &embeddings[&profile.user_id];
        if embedding.len() != dimension {
            return Err(Error::Shape(format!(
                "embedding for {} has {} entries, expected {dimension}",
                profile.user_id,
                embedding.len()
            )));
        }
        for (j, &v) in embedding.iter().enumerate() {
            values.set(i, j, v);
        }
        values.set(i, dimension, profile.followers_count as f64);
        values.set(i, dimension + 1, profile.favorites_count as f64);
        values.set(i, dimension + 2, f64::from(u8::from(profile.verified)));
        values.set(i, dimension + 3, user_imp[&profile.user_id]);
        row_ids.push(profile.user_id.clone());
    }
    let mut column_names: Vec<String> = (0..dimension).map(|j| format!("emb{j}")).collect();
    column_names.extend(
        ["followers", "favorites", "verified", "user_imp"]
            .iter()
            .map(|s| s.to_string()),
    );
    Ok(FeatureMatrix {
        row_ids,
        column_names,
        values,
    })
}

/// Per-column z-scoring with mean and (population) standard deviation
/// computed on `fit_rows` only, applied to every row. Zero-variance
/// columns map to all zeros.
pub fn standardize(matrix: &FeatureMatrix, fit_rows: &[usize]) -> Result<FeatureMatrix> {
    if fit_rows.is_empty() {
        return Err(Error::InvalidInput("standardize needs at least one fit row".into()));
    }
    let n = matrix.n_rows();
    let cols = matrix.n_cols();
    for &r in fit_rows {
        if r >= n {
            return Err(Error::InvalidInput(format!(
                "fit row {r} outside matrix with {n} rows"
            )));
        }
    }
    let mut out = Mat::zeros(n, cols);
    for j in 0..cols {
        let mean = fit_rows
            .iter()
            .map(|&r| matrix.values.get(r, j))
            .sum::<f64>()
            / fit_rows.len() as f64;
        let variance = fit_rows
            .iter()
            .map(|&r| (matrix.values.get(r, j) - mean).powi(2))
            .sum::<f64>()
            / fit_rows.len() as f64;
        let std = variance.sqrt();
        if std > 0.0 {
            for i in 0..n {
                out.set(i, j, (matrix.values.get(i, j) - mean) / std);
            }
        }
        // zero-variance columns stay all zero
    }
    Ok(FeatureMatrix {
        row_ids: matrix.row_ids.clone(),
        column_names: matrix.column_names.clone(),
        values: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::RumorLabel;

    fn provider(dim: usize) -> EmbeddingProvider {
        EmbeddingProvider::hash_random(42, dim)
    }

    #[test]
    fn empty_tokens_embed_to_zero() {
        let p = provider(8);
        let v = embed_text(&Vec::<String>::new(), &p);
        assert_eq!(v, vec![0.0; 8]);
    }

    #[test]
    fn single_word_is_its_own_vector() {
        let p = provider(16);
        let direct = p.lookup("hello").unwrap();
        assert_eq!(embed_text(&["hello"], &p), direct);
    }

    #[test]
    fn two_words_average_elementwise() {
        let p = provider(8);
        let a = p.lookup("alpha").unwrap();
        let b = p.lookup("beta").unwrap();
        let mean = embed_text(&["alpha", "beta"], &p);
        for i in 0..8 {
            assert!((mean[i] - (a[i] + b[i]) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hash_provider_is_deterministic_and_unit_variance() {
        let p = provider(4000);
        let a = p.lookup("word").unwrap();
        let b = p.lookup("word").unwrap();
        assert_eq!(a, b);
        let mean: f64 = a.iter().sum::<f64>() / a.len() as f64;
        let var: f64 = a.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / a.len() as f64;
        assert!(mean.abs() < 0.1, "mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "variance {var}");
    }

    #[test]
    fn file_backed_provider_and_unknown_words() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vectors.txt");
        std::fs::write(&path, "2 3\nfoo 1.0 2.0 3.0\nbar -1.0 0.0 1.0\n").unwrap();
        let p = EmbeddingProvider::from_file(&path).unwrap();
        assert_eq!(p.dimension(), 3);
        assert_eq!(p.lookup("foo").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(p.lookup("baz").is_none());
        // mean over known words only; fully unknown input embeds to zero
        assert_eq!(embed_text(&["foo", "baz"], &p), vec![1.0, 2.0, 3.0]);
        assert_eq!(embed_text(&["baz"], &p), vec![0.0; 3]);
    }

    #[test]
    fn file_backed_rejects_ragged_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "foo 1.0 2.0\nbar 1.0\n").unwrap();
        let err = EmbeddingProvider::from_file(&path).unwrap_err().to_string();
        assert!(err.contains("line 2"), "got: {err}");
    }

    #[test]
    fn user_importance_examples() {
        let counts: BTreeMap<String, u64> =
            [("a".to_string(), 5), ("b".to_string(), 15)].into();
        let imp = user_importance(&counts);
        assert_eq!(imp["a"], 0.25);
        assert_eq!(imp["b"], 0.75);

        let single: BTreeMap<String, u64> = [("a".to_string(), 7)].into();
        assert_eq!(user_importance(&single)["a"], 1.0);

        let zeros: BTreeMap<String, u64> =
            [("a".to_string(), 0), ("b".to_string(), 0)].into();
        let imp = user_importance(&zeros);
        assert!(imp.values().all(|&v| v == 0.0));
    }

    #[test]
    fn importance_sums_to_one_when_replies_exist() {
        let counts: BTreeMap<String, u64> = [
            ("a".to_string(), 3),
            ("b".to_string(), 0),
            ("c".to_string(), 9),
        ]
        .into();
        let imp = user_importance(&counts);
        let sum: f64 = imp.values().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(imp.values().all(|&v| v >= 0.0));
    }

    fn profile(user: &str, followers: u64, favorites: u64, verified: bool) -> UserProfile {
        UserProfile {
            user_id: user.into(),
            tweet_labels: vec![RumorLabel::NonRumor],
            intensity_score: 0.0,
            spreader_class: 0,
            followers_count: followers,
            favorites_count: favorites,
            verified,
        }
    }

    fn tiny_inputs(
        dim: usize,
    ) -> (Vec<UserProfile>, BTreeMap<String, Vec<f64>>, BTreeMap<String, f64>) {
        let profiles = vec![
            profile("a", 10, 1, false),
            profile("b", 20, 2, true),
            profile("c", 30, 3, false),
        ];
        let embeddings: BTreeMap<String, Vec<f64>> = profiles
            .iter()
            .enumerate()
            .map(|(i, p)| (p.user_id.clone(), vec![i as f64; dim]))
            .collect();
        let imp: BTreeMap<String, f64> = profiles
            .iter()
            .map(|p| (p.user_id.clone(), 0.25))
            .collect();
        (profiles, embeddings, imp)
    }

    #[test]
    fn assemble_layout_is_dim_plus_four() {
        let (profiles, embeddings, imp) = tiny_inputs(4);
        let m = assemble(&profiles, &embeddings, &imp, 4).unwrap();
        assert_eq!((m.n_rows(), m.n_cols()), (3, 8));
        assert_eq!(m.column_names[4..], ["followers", "favorites", "verified", "user_imp"]);
        assert_eq!(m.column("followers").unwrap(), vec![10.0, 20.0, 30.0]);
        assert_eq!(m.column("verified").unwrap(), vec![0.0, 1.0, 0.0]);
        // column slices recover each input exactly
        assert_eq!(m.column("emb0").unwrap(), vec![0.0, 1.0, 2.0]);
        assert_eq!(m.column("user_imp").unwrap(), vec![0.25, 0.25, 0.25]);
    }

    #[test]
    fn assemble_names_missing_users() {
        let (profiles, mut embeddings, imp) = tiny_inputs(4);
        embeddings.remove("b");
        let err = assemble(&profiles, &embeddings, &imp, 4)
            .unwrap_err()
            .to_string();
        assert!(err.contains('b'), "got: {err}");
    }

    #[test]
    fn standardize_centers_and_scales() {
        let m = FeatureMatrix {
            row_ids: vec!["a".into(), "b".into(), "c".into()],
            column_names: vec!["x".into(), "const".into()],
            values: Mat::from_vec(3, 2, vec![1.0, 7.0, 2.0, 7.0, 3.0, 7.0]).unwrap(),
        };
        let z = standardize(&m, &[0, 1, 2]).unwrap();
        let col = z.column("x").unwrap();
        let mean: f64 = col.iter().sum::<f64>() / 3.0;
        let var: f64 = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 3.0;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-12);
        assert_eq!(z.column("const").unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn standardize_fits_on_train_rows_only() {
        let m = FeatureMatrix {
            row_ids: vec!["a".into(), "b".into(), "c".into()],
            column_names: vec!["x".into()],
            values: Mat::from_vec(3, 1, vec![1.0, 3.0, 100.0]).unwrap(),
        };
        // fit on rows 0 and 1: mean 2, population std 1
        let z = standardize(&m, &[0, 1]).unwrap();
        let col = z.column("x").unwrap();
        assert!((col[0] - -1.0).abs() < 1e-12);
        assert!((col[1] - 1.0).abs() < 1e-12);
        assert!((col[2] - 98.0).abs() < 1e-12, "test row uses train stats");
    }

    #[test]
    fn standardize_is_idempotent_on_fit_rows() {
        let m = FeatureMatrix {
            row_ids: (0..5).map(|i| format!("u{i}")).collect(),
            column_names: vec!["x".into(), "y".into()],
            values: Mat::from_vec(
                5,
                2,
                vec![1.0, 5.0, 2.0, 4.0, 3.0, 3.0, 4.0, 2.0, 5.0, 1.0],
            )
            .unwrap(),
        };
        let rows: Vec<usize> = (0..5).collect();
        let once = standardize(&m, &rows).unwrap();
        let twice = standardize(&once, &rows).unwrap();
        for (a, b) in once.values.data().iter().zip(twice.values.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn user_texts_and_reply_counts_cover_everyone() {
        let (corpus, _) = crate::synth::generate(&crate::synth::SynthSpec {
            n_initiators: 25,
            seed: 77,
            ..crate::synth::SynthSpec::default()
        });
        let texts = user_texts(&corpus);
        let counts = reply_counts(&corpus);
        let stats = crate::ingest::corpus_stats(&corpus);
        assert_eq!(texts.len(), stats.unique_users);
        assert_eq!(counts.len(), stats.unique_users);
        let total: u64 = counts.values().sum();
        assert_eq!(total as usize, stats.replies);
    }

    #[test]
    fn embed_users_single_and_duplicate_tweets() {
        use crate::ingest::{IncidentCorpus, TweetRecord};
        let p = provider(6);
        let mk = |texts: &[&str]| IncidentCorpus {
            incident_name: "t".into(),
            records: texts
                .iter()
                .map(|t| TweetRecord {
                    initiator_user_id: "u".into(),
                    tweet_text: t.to_string(),
                    followers_count: 0,
                    favorites_count: 0,
                    verified: false,
                    replies: vec![],
                    rumor_label: RumorLabel::NonRumor,
                })
                .collect(),
        };
        let single = embed_users(&mk(&["tok0001 tok0002"]), &p);
        let duplicated = embed_users(&mk(&["tok0001 tok0002", "tok0001 tok0002"]), &p);
        assert_eq!(single["u"], duplicated["u"]);

        // two distinct tweets: elementwise mean of their embeddings
        let distinct = embed_users(&mk(&["tok0001", "tok0002"]), &p);
        let a = embed_text(&["tok0001"], &p);
        let b = embed_text(&["tok0002"], &p);
        for i in 0..6 {
            assert!((distinct["u"][i] - (a[i] + b[i]) / 2.0).abs() < 1e-15);
        }
    }
}

//! MinHash signatures over token shingles. Each of the `num_hashes`
//! functions is an independent 64-bit mix keyed by its index; the match
//! fraction of per-function minima estimates the Jaccard similarity of
//! the underlying shingle sets.

use crate::error::{Error, Result};
use crate::{fnv1a64, splitmix64};

pub const DEFAULT_NUM_HASHES: usize = 256;
pub const DEFAULT_SHINGLE_SIZE: usize = 2;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinHashParams {
    pub num_hashes: usize,
    pub shingle_size: usize,
    pub seed: u64,
}

impl Default for MinHashParams {
    fn default() -> Self {
        MinHashParams {
            num_hashes: DEFAULT_NUM_HASHES,
            shingle_size: DEFAULT_SHINGLE_SIZE,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinHashSignature {
    params: MinHashParams,
    minima: Vec<u64>,
}

impl MinHashSignature {
    pub fn params(&self) -> MinHashParams {
        self.params
    }

    pub fn minima(&self) -> &[u64] {
        &self.minima
    }
}

/// The k-token shingles of a token list, as stable 64-bit hashes. Lists
/// shorter than the shingle size collapse to a single whole-list shingle.
pub fn shingle_hashes<S: AsRef<str>>(tokens: &[S], shingle_size: usize) -> Vec<u64> {
    assert!(shingle_size >= 1, "shingle_size must be positive");
    let hash_window = |window: &[S]| {
        let mut bytes = Vec::new();
        for (i, tok) in window.iter().enumerate() {
            if i > 0 {
                bytes.push(0x1f);
            }
            bytes.extend_from_slice(tok.as_ref().as_bytes());
        }
        fnv1a64(&bytes)
    };
    if tokens.len() < shingle_size {
        return vec![hash_window(tokens)];
    }
    tokens.windows(shingle_size).map(hash_window).collect()
}

/// Computes the signature of a token list.
pub fn minhash_signature<S: AsRef<str>>(tokens: &[S], params: MinHashParams) -> MinHashSignature {
    assert!(params.num_hashes >= 1, "num_hashes must be positive");
    let shingles = shingle_hashes(tokens, params.shingle_size);
    let mut minima = vec![u64::MAX; params.num_hashes];
    for &shingle in &shingles {
        for (i, slot) in minima.iter_mut().enumerate() {
            let key = splitmix64(params.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let h = splitmix64(shingle ^ key);
            if h < *slot {
                *slot = h;
            }
        }
    }
    MinHashSignature { params, minima }
}

/// Fraction of matching minima between two signatures computed under
/// identical parameters.
pub fn estimate_similarity(a: &MinHashSignature, b: &MinHashSignature) -> Result<f64> {
    if a.params != b.params {
        return Err(Error::MinHashParams(format!(
            "{:?} vs {:?}",
            a.params, b.params
        )));
    }
    let matches = a
        .minima
        .iter()
        .zip(&b.minima)
        .filter(|(x, y)| x == y)
        .count();
    Ok(matches as f64 / a.minima.len() as f64)
}

/// Exact Jaccard similarity of the two shingle sets; the oracle the
/// estimator is tested against.
pub fn exact_jaccard<S: AsRef<str>>(a: &[S], b: &[S], shingle_size: usize) -> f64 {
    use std::collections::HashSet;
    let sa: HashSet<u64> = shingle_hashes(a, shingle_size).into_iter().collect();
    let sb: HashSet<u64> = shingle_hashes(b, shingle_size).into_iter().collect();
    let inter = sa.intersection(&sb).count();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 1.0;
    }
    inter as f64 / union as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn identical_lists_give_identical_signatures() {
        let params = MinHashParams::default();
        let a = minhash_signature(&toks(&["one", "two", "three"]), params);
        let b = minhash_signature(&toks(&["one", "two", "three"]), params);
        assert_eq!(a, b);
        assert_eq!(estimate_similarity(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_sets_estimate_near_zero() {
        let params = MinHashParams::default();
        let a = minhash_signature(&toks(&["aa", "bb", "cc", "dd", "ee"]), params);
        let b = minhash_signature(&toks(&["ff", "gg", "hh", "ii", "jj"]), params);
        assert_eq!(exact_jaccard(&toks(&["aa", "bb"]), &toks(&["ff", "gg"]), 2), 0.0);
        let sim = estimate_similarity(&a, &b).unwrap();
        assert!(sim <= 0.05, "expected near-zero similarity, got {sim}");
    }

    #[test]
    fn known_third_jaccard_within_tolerance() {
        // unigram shingles: {a, b} vs {a, c}; intersection 1, union 3
        let params = MinHashParams {
            shingle_size: 1,
            ..MinHashParams::default()
        };
        let a = toks(&["a", "b"]);
        let b = toks(&["a", "c"]);
        let exact = exact_jaccard(&a, &b, 1);
        assert!((exact - 1.0 / 3.0).abs() < 1e-12);
        let est = estimate_similarity(
            &minhash_signature(&a, params),
            &minhash_signature(&b, params),
        )
        .unwrap();
        assert!(
            (est - exact).abs() <= 0.06,
            "estimate {est} strayed from exact {exact}"
        );
    }

    #[test]
    fn estimate_is_the_match_fraction_of_minima() {
        let params = MinHashParams {
            num_hashes: 64,
            ..MinHashParams::default()
        };
        let a = minhash_signature(&toks(&["aa", "bb", "cc", "dd"]), params);
        let b = minhash_signature(&toks(&["aa", "bb", "zz", "qq"]), params);
        let manual = a
            .minima()
            .iter()
            .zip(b.minima())
            .filter(|(x, y)| x == y)
            .count() as f64
            / params.num_hashes as f64;
        assert_eq!(estimate_similarity(&a, &b).unwrap(), manual);
        // disjoint minima count as zero matches
        let c = minhash_signature(&toks(&["m1", "m2", "m3"]), params);
        let d = minhash_signature(&toks(&["n1", "n2", "n3"]), params);
        let matches = c.minima().iter().zip(d.minima()).filter(|(x, y)| x == y).count();
        assert_eq!(
            estimate_similarity(&c, &d).unwrap(),
            matches as f64 / params.num_hashes as f64
        );
    }

    #[test]
    fn mismatched_params_error() {
        let a = minhash_signature(
            &toks(&["x"]),
            MinHashParams {
                num_hashes: 16,
                ..MinHashParams::default()
            },
        );
        let b = minhash_signature(
            &toks(&["x"]),
            MinHashParams {
                num_hashes: 32,
                ..MinHashParams::default()
            },
        );
        assert!(estimate_similarity(&a, &b).is_err());
    }

    #[test]
    fn short_list_collapses_to_single_shingle() {
        assert_eq!(shingle_hashes(&toks(&["only"]), 2).len(), 1);
        assert_eq!(shingle_hashes(&Vec::<String>::new(), 2).len(), 1);
        // the whole-list shingle of a too-short list is deterministic
        let a = minhash_signature(&toks(&["only"]), MinHashParams::default());
        let b = minhash_signature(&toks(&["only"]), MinHashParams::default());
        assert_eq!(estimate_similarity(&a, &b).unwrap(), 1.0);
    }

    proptest! {
        /// Signatures are a pure function of tokens and parameters.
        #[test]
        fn signature_deterministic(words in proptest::collection::vec("[a-z]{1,5}", 0..12),
                                   seed in any::<u64>()) {
            let params = MinHashParams { num_hashes: 32, shingle_size: 2, seed };
            let a = minhash_signature(&words, params);
            let b = minhash_signature(&words, params);
            prop_assert_eq!(a, b);
        }

        /// Estimates never leave [0, 1] and equal 1 for identical input.
        #[test]
        fn estimate_bounded(xs in proptest::collection::vec("[a-z]{1,4}", 0..10),
                            ys in proptest::collection::vec("[a-z]{1,4}", 0..10)) {
            let params = MinHashParams { num_hashes: 64, ..MinHashParams::default() };
            let sx = minhash_signature(&xs, params);
            let sy = minhash_signature(&ys, params);
            let sim = estimate_similarity(&sx, &sy).unwrap();
            prop_assert!((0.0..=1.0).contains(&sim));
        }
    }
}

//! End-to-end pipeline for identifying possible rumor spreaders on
//! Twitter-style data: corpus ingestion, weak-supervised labeling via
//! MinHash text similarity, user-user reply graph construction, and a
//! from-scratch two-layer graph convolutional network evaluated under
//! stratified k-fold cross-validation.

pub mod error;
pub mod eval;
pub mod features;
pub mod gcn;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod synth;
pub mod textprep;
pub mod weaklabel;

pub use error::{Error, Result};

/// 64-bit mix used wherever the crate derives seeds or hashes tokens.
/// SplitMix64 finalizer; stable across platforms and versions.
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over raw bytes; used for deterministic token hashing.
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

//! Deterministic, label-separated random streams.
//!
//! Every stream is a ChaCha8 generator keyed by SHA-256 over the seed and a
//! label, so `(seed, label)` fully determines the output on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Stream = ChaCha8Rng;

const DOMAIN: &[u8] = b"np-engine/stream/v1";

pub fn derive_stream(seed: u64, label: &str) -> Stream {
    let mut hasher = Sha256::new();
    hasher.update(DOMAIN);
    hasher.update(seed.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// A derived 64-bit seed, used when one seed fans out into many instances.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    use rand::RngCore;
    derive_stream(seed, label).next_u64()
}

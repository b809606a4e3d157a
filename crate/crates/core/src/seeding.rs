//! Deterministic per-task random streams.
//!
//! A task seed is derived from the master seed and a list of integer keys by
//! repeated splitmix64 finalisation; the stream itself is ChaCha8 seeded with
//! that 64-bit value (`rand_chacha::ChaCha8Rng::seed_from_u64`).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The splitmix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, keys: &[u64]) -> u64 {
    keys.iter().fold(splitmix64(master), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

pub fn task_rng(master: u64, keys: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, keys))
}

//! Deterministic seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded from a 64-bit
//! value. Derived seeds are produced by folding the inputs through the
//! SplitMix64 finaliser:
//!
//! ```text
//! h_0 = 0x9E37_79B9_7F4A_7C15
//! h_{k+1} = splitmix64(h_k ^ part_k)
//! ```
//!
//! so a trial seed is `mix_seed(&[base, s, n, trial])`, independent of the
//! order in which trials are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x9E37_79B9_7F4A_7C15, |h, &p| splitmix64(h ^ p))
}

/// Seed of one benchmark trial.
pub fn trial_seed(base: u64, s: usize, n: usize, trial: usize) -> u64 {
    mix_seed(&[base, s as u64, n as u64, trial as u64])
}

/// Independent sub-stream of `seed` identified by `tag`.
pub fn stream(seed: u64, tag: u64) -> Rng {
    Rng::seed_from_u64(mix_seed(&[seed, tag]))
}

pub fn from_seed(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

//! Per-path random streams.
//!
//! Every path of an ensemble owns an independent generator so that path `i`
//! can be regenerated in isolation, whatever the order or degree of
//! parallelism used to produce the rest of the ensemble.
//!
//! The derivation is part of the public contract:
//!
//! ```text
//! substream_seed(base, i) = mix64(mix64(base) ^ (i * 0x9E3779B97F4A7C15))
//! generator(i)            = ChaCha8Rng::seed_from_u64(substream_seed(base, i))
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer and all arithmetic wraps modulo
//! 2^64. ChaCha8 is a counter-mode generator; `seed_from_u64` expands the
//! 64-bit substream seed into its 256-bit key with the PCG32 expansion
//! specified by `rand_core` 0.6.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type used by every sampler in this crate.
pub type PathRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the substream owned by path `index` of an ensemble with base seed `base`.
#[inline]
pub fn substream_seed(base: u64, index: u64) -> u64 {
    mix64(mix64(base) ^ index.wrapping_mul(GOLDEN_GAMMA))
}

/// Generator seeded directly from a substream seed.
pub fn stream_rng(stream_seed: u64) -> PathRng {
    ChaCha8Rng::seed_from_u64(stream_seed)
}

/// Generator for path `index` under base seed `base`.
pub fn path_rng(base: u64, index: u64) -> PathRng {
    stream_rng(substream_seed(base, index))
}

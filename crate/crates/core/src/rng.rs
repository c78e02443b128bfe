//! Seeded, splittable random streams.
//!
//! Every randomized routine takes a 64-bit seed. Independent substreams
//! (per worker, per code, per erasure probability) are ChaCha stream
//! selections on the same key, so results never depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ForgeRng = ChaCha8Rng;

/// Identifier recorded in reports so runs can be reproduced.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.3/seed_from_u64+set_stream";

pub fn rng_from_seed(seed: u64) -> ForgeRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `stream` of the generator keyed by `seed`.
pub fn substream(seed: u64, stream: u64) -> ForgeRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer; derives child seeds from `(seed, tag)`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

//! Deterministic random streams.
//!
//! Every random draw in the crate (reservoir weights, masks, splits, synthetic
//! data) goes through [`seeded_rng`]. ChaCha8 is used because its output is
//! specified independently of platform and word size.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Create a deterministic stream from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive a child seed from a base seed and a sequence of stream identifiers.
///
/// Parallel workers never share a stream; each one calls this with its own
/// coordinates (grid indices, trial number, ...) and owns the result.
pub fn derive_seed(base: u64, stream_ids: &[u64]) -> u64 {
    let mut acc = splitmix64(base);
    for &id in stream_ids {
        acc = splitmix64(acc ^ splitmix64(id.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    acc
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

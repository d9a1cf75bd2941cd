//! Seeded random streams.
//!
//! Randomized constructions never share a generator: each call site derives
//! its own stream from the user seed plus a string label, so adding draws
//! in one routine cannot shift the values any other routine sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for a `(seed, label)` pair.
pub fn seeded_stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

/// 64-bit FNV-1a over the label bytes.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in s.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

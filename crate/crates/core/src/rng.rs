//! Seeding helpers. Every random stream in the crate is a ChaCha8 generator
//! seeded from a 64-bit value, so results are reproducible across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ErgoRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> ErgoRng {
    ErgoRng::seed_from_u64(seed)
}

/// Derives the seed of replica `index` from a base seed.
///
/// SplitMix64 finalizer applied to `seed + (index + 1) * 0x9E3779B97F4A7C15`
/// (wrapping). Distinct indices give well-separated seeds.
pub fn mix64(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn mix64_separates_replicas() {
        let seeds: HashSet<u64> = (0..1000).map(|i| mix64(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(mix64(1, 0), mix64(2, 0));
        assert_eq!(mix64(7, 3), mix64(7, 3));
    }
}

//! Deterministic per-task seeds.
//!
//! Every random draw is keyed by `(global seed, cell key, trial)` so results
//! do not depend on scheduling or on which other cells run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into `seed`.
pub fn derive(seed: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix(seed.wrapping_add(GOLDEN));
    for &p in parts {
        h = splitmix(
            h ^ p
                .wrapping_add(GOLDEN)
                .wrapping_add(h << 6)
                .wrapping_add(h >> 2),
        );
    }
    h
}

pub fn rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, parts))
}

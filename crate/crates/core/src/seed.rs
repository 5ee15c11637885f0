//! Labeled sub-seed derivation.
//!
//! Every stochastic stage of an experiment draws from its own generator, seeded
//! from the master seed and a fixed stage label. Changing one stage (for
//! example the number of trajectories) never perturbs the draws of another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate. ChaCha output is platform independent.
pub type SimRng = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a sub-seed for `label` from `master`.
pub fn derive(master: u64, label: &str) -> u64 {
    let mut h = FNV_OFFSET;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    splitmix64(splitmix64(master) ^ h)
}

/// Derives a sub-seed for an indexed stage, e.g. `("trajectory", 7)`.
pub fn derive_indexed(master: u64, label: &str, index: u64) -> u64 {
    splitmix64(derive(master, label) ^ splitmix64(index))
}

pub fn rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

//! Seeded randomness.
//!
//! All randomness in the engine flows through [`Rng`], a ChaCha8 stream
//! cipher generator. Its output is specified bit-for-bit, so shot counts and
//! initial parameters reproduce across platforms for a given seed.

use rand_core::RngCore;

pub use rand_chacha::ChaCha8Rng as Rng;
pub use rand_core::SeedableRng;

/// Generator for `seed`.
pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Uniform draw from `[0, 1)` using the top 53 bits of one output word.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent seed for sub-task `index` (a trial, a block) of run `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over seed ^ index.
    let mut z = (seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Number of zeros in `shots` fair coin flips.
pub fn fair_zero_count(rng: &mut impl RngCore, shots: u64) -> u64 {
    let mut remaining = shots;
    let mut ones = 0u64;
    while remaining >= 64 {
        ones += u64::from(rng.next_u64().count_ones());
        remaining -= 64;
    }
    if remaining > 0 {
        let word = rng.next_u64() & ((1u64 << remaining) - 1);
        ones += u64::from(word.count_ones());
    }
    shots - ones
}

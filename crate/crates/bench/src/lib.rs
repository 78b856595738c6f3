//! Seeded inputs shared by the `walsh-hardy` benchmarks.

use walsh_hardy::random::{random_function, seeded_rng, DEFAULT_SEED};
use walsh_hardy::DyadicFunction;

/// Resolutions swept by the transform and norm benchmarks.
pub const RESOLUTIONS: [u32; 4] = [8, 12, 16, 20];

/// A reproducible random step function on `2^resolution` cells.
pub fn sample_function(resolution: u32) -> DyadicFunction {
    let mut rng = seeded_rng(DEFAULT_SEED ^ u64::from(resolution));
    random_function(resolution, &mut rng).expect("resolution within the supported range")
}

/// Indices with many runs, `0b1010...` truncated to `bits` bits, plus the
/// all-ones and single-bit extremes.
pub fn index_samples(bits: u32) -> [u64; 3] {
    let mask = (1u64 << bits) - 1;
    [0xAAAA_AAAA_AAAA_AAAA & mask, mask, 1 << (bits - 1)]
}

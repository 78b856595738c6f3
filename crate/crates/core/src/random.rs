//! Seeded randomness for reproducible sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::walsh::DyadicFunction;

/// Seed used by every randomized check unless overridden.
pub const DEFAULT_SEED: u64 = 1729;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A function with cell values drawn uniformly from `[-1, 1)`.
pub fn random_function<R: Rng + ?Sized>(resolution: u32, rng: &mut R) -> Result<DyadicFunction> {
    DyadicFunction::from_fn(resolution, |_| rng.random_range(-1.0..1.0))
}

/// Derives an independent stream seed for item `index` of a sweep.
pub fn substream(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

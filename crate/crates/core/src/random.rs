use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{int, Rational};

pub const DEFAULT_SEED: u64 = 1729;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Point whose coordinates are odd integers in [-15, 15].
pub fn odd_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| int(2 * rng.gen_range(0..16) - 15)).collect()
}

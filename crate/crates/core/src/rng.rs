//! Seed derivation. Every random draw in the crate comes from a ChaCha8
//! stream keyed by `(seed, stream)`, so independent trials can run in any
//! order and still reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SketchRng = ChaCha8Rng;

/// Generator for trial `stream` of an experiment seeded with `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> SketchRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

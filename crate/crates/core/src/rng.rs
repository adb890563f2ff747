//! Seeded random streams.
//!
//! Every stochastic routine takes either a caller-owned generator or a master
//! seed. Independent trials draw from distinct ChaCha streams of the same
//! seed, so results do not depend on how trials are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type WalkRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> WalkRng {
    WalkRng::seed_from_u64(seed)
}

/// Generator for trial `index` under master seed `seed`.
pub fn stream(seed: u64, index: u64) -> WalkRng {
    let mut rng = WalkRng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A seed drawn from OS entropy, for runs that were not given one.
pub fn fresh_seed() -> u64 {
    rand::random()
}

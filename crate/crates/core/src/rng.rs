//! Seeded randomness.
//!
//! Every random draw in the crate goes through [`SimRng`] (ChaCha8), seeded
//! from a `u64`. Concurrent tasks derive independent substreams with
//! [`substream`]: the generator is seeded from the master seed and its
//! ChaCha stream id is set to the task index, so task `k` of master seed `s`
//! always sees the same sequence regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Split function: independent generator for `task` under `master`.
pub fn substream(master: u64, task: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(task);
    rng
}

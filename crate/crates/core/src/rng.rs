//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator. A 64-bit
//! seed selects the key (via `seed_from_u64`) and an optional stream index
//! selects one of 2^64 independent streams under that key. Monte Carlo
//! trials use `substream(seed, trial)`, so any trial can be regenerated in
//! isolation and trials may run in any order on any number of workers.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derive a fresh 64-bit seed from `rng`.
pub fn child_seed(rng: &mut Rng) -> u64 {
    rng.next_u64()
}

//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from ChaCha8, a
//! counter-based generator. A 64-bit seed selects the key and a 64-bit
//! stream id selects an independent keystream, so replication `r` of an
//! experiment seeded with `s` always reads `stream(s, r)` no matter which
//! thread runs it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream id reserved for draws shared by all replications (e.g. a fixed
/// design).
pub const SHARED_STREAM: u64 = u64::MAX;

pub fn stream(seed: u64, stream_id: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Uniformly random permutation of `0..n` (Fisher–Yates with 64-bit range
/// sampling, so the result does not depend on the platform's word size).
pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        perm.swap(i, j);
    }
    perm
}

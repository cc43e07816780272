//! Seeded, splittable random streams.
//!
//! Every randomized routine derives its generator from `(seed, tag, indices)`
//! instead of threading one generator through the computation. Streams are
//! therefore independent of evaluation order, which keeps parallel runs
//! bit-identical to sequential ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream tags. Distinct call sites use distinct tags so their streams never
/// coincide for equal indices.
pub mod tag {
    pub const MATRIX: u64 = 0x01;
    pub const SINGLE_WITNESS: u64 = 0x10;
    pub const K_WITNESS: u64 = 0x11;
    pub const K_WITNESS_FILL: u64 = 0x12;
    pub const MULTIWITNESS: u64 = 0x13;
    pub const SPARSIFY: u64 = 0x14;
    pub const RANK_BOUNDED: u64 = 0x15;
    pub const MAX_WIT: u64 = 0x20;
    pub const ALGORITHM: u64 = 0x21;
    pub const TRADEOFF: u64 = 0x22;
    pub const CAMPAIGN: u64 = 0x30;
    pub const GRAPH: u64 = 0x40;
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a tag and an index path to a 64-bit stream identifier.
pub fn stream_id(tag: u64, indices: &[u64]) -> u64 {
    let mut h = splitmix64(tag ^ 0xA076_1D64_78BD_642F);
    for &x in indices {
        h = splitmix64(h ^ splitmix64(x));
    }
    h
}

/// Derives a seed for a nested randomized routine.
pub fn derive_seed(seed: u64, tag: u64, indices: &[u64]) -> u64 {
    splitmix64(seed ^ stream_id(tag, indices).rotate_left(17))
}

/// ChaCha8 keyed by `seed`, positioned on the stream named by `(tag, indices)`.
pub fn stream(seed: u64, tag: u64, indices: &[u64]) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(tag, indices));
    rng
}

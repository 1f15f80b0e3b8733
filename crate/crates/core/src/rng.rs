//! Named, seeded random-number substreams.
//!
//! All randomness in the simulator flows from a single 64-bit master seed
//! through named substreams: the train/test split draws from
//! `substream(seed, "split")`, shard assignment from
//! `substream(seed, "partition")`, cold parameter initialization from
//! `substream(seed, "theta-init")`, and so on. Because each consumer owns an
//! independent stream, adding a new consumer (with a new label) cannot
//! perturb the draws seen by existing ones — runs stay reproducible as the
//! simulator grows.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Seed derivation
// ---------------------------------------------------------------------------

/// 64-bit FNV-1a hash of a byte string.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// SplitMix64 finalizer; decorrelates nearby seed/label mixtures.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic RNG for the named substream of a master seed.
///
/// The same `(master_seed, label)` pair always yields the same stream;
/// different labels (or seeds) yield independent-looking streams.
pub fn substream(master_seed: u64, label: &str) -> ChaCha8Rng {
    let derived = mix(mix(master_seed).wrapping_add(fnv1a64(label.as_bytes())));
    ChaCha8Rng::seed_from_u64(derived)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

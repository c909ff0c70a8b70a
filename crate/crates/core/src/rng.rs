//! Reproducible random streams keyed by `(seed, stream index)`.
//!
//! ChaCha is counter based: every stream is an independent keystream, so
//! replicate `i` draws the same numbers regardless of which worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x4557_4E53;

/// Generator for replicate `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

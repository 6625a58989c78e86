//! Reproducible counter-based random streams.
//!
//! Every Monte Carlo consumer in this crate draws from a substream keyed
//! by `(seed, index)`: the seed expands into a ChaCha key and the index
//! selects the cipher stream. Sample `i` therefore sees the same draws no
//! matter in which order (or on how many threads) the batch is filled.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step; used to expand seeds and derive independent ones.
fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
}

fn splitmix64_output(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Expand a 64-bit seed into a 256-bit ChaCha key.
fn expand_key(seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_mut(8) {
        splitmix64(&mut state);
        chunk.copy_from_slice(&splitmix64_output(state).to_le_bytes());
    }
    key
}

/// The substream for one sample index under a given seed.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(expand_key(seed));
    rng.set_stream(index);
    rng
}

/// Derive an independent seed, for estimators that need uncorrelated
/// batches (e.g. independent copies of two measures).
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    splitmix64_output(seed ^ splitmix64_output(salt.wrapping_add(0x51b5_ca32_7fd4_a4e5)))
}

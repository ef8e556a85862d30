//! Seed derivation shared by every stochastic routine.
//!
//! A base seed `S` and an index `i` are mixed with SplitMix64 into a child
//! seed, which then seeds a ChaCha8 stream. Matrix column `i` draws from the
//! stream derived from `(S, i)`; Monte Carlo trial `t` samples its matrix with
//! seed `derive_seed(S ^ tag, t)` for a per-routine tag. Because every column
//! owns its stream, sampling one column alone reproduces that column of the
//! full matrix.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub(crate) const TAG_MOMENT: u64 = 0x6d6f_6d65_6e74_5f5a;
pub(crate) const TAG_FAILURE: u64 = 0x6661_696c_7572_6573;
pub(crate) const TAG_U_P: u64 = 0x755f_705f_6877_5f5f;
pub(crate) const TAG_VECTORS: u64 = 0x7665_6374_6f72_7321;
pub(crate) const TAG_GRID: u64 = 0x6772_6964_5f71_6621;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `index` under `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, index))
}

//! Counter-based randomness.
//!
//! Every random draw in the crate is addressed by `(seed, stream_id, index)`:
//! the pair `(seed, stream_id)` keys a ChaCha8 generator and `index` selects
//! its 64-bit stream. Sample `i` of a Monte Carlo run therefore sees the same
//! bits no matter how the run is chunked across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Generator handed to samplers and perturbers for a single sample.
pub type SampleRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_id: u64,
}

/// Stream tags used by the estimators; kept distinct so the data draws and
/// the noise draws of one sample never share bits.
pub mod streams {
    pub const DATA: u64 = 0x6461_7461;
    pub const PERTURB: u64 = 0x7065_7274;
    pub const ORACLE_KEY: u64 = 0x6f72_636c;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngSeed {
    pub const fn new(seed: u64) -> Self {
        RngSeed { seed, stream_id: 0 }
    }

    pub const fn with_stream(seed: u64, stream_id: u64) -> Self {
        RngSeed { seed, stream_id }
    }

    /// Derived seed for an independent sub-experiment.
    pub fn child(&self, tag: u64) -> RngSeed {
        RngSeed {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(tag.wrapping_add(1))),
        }
    }

    /// Generator for draw `index`. Pure function of `(seed, stream_id, index)`.
    pub fn rng_for(&self, index: u64) -> SampleRng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream_id.to_le_bytes());
        key[16..24].copy_from_slice(&splitmix64(self.seed).to_le_bytes());
        key[24..].copy_from_slice(&splitmix64(self.stream_id ^ 0x5eed).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        rng
    }
}

impl Default for RngSeed {
    fn default() -> Self {
        RngSeed::new(0)
    }
}

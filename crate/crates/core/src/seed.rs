//! Seed discipline.
//!
//! Every stochastic routine takes a [`RunSeed`] and builds its own generator
//! from it. Independent streams (clustering runs, subset draws) are derived
//! with [`RunSeed::derive`], so results never depend on evaluation order or
//! thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type SeededRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RunSeed(pub u64);

impl RunSeed {
    pub fn new(seed: u64) -> Self {
        RunSeed(seed)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> SeededRng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Child seed for an independent stream, mixed with splitmix64.
    pub fn derive(self, stream: u64) -> RunSeed {
        let mut z = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(stream.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RunSeed(z ^ (z >> 31))
    }
}

impl From<u64> for RunSeed {
    fn from(v: u64) -> Self {
        RunSeed(v)
    }
}

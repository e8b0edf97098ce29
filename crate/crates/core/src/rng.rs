//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by a
//! `(seed, stream)` pair. ChaCha is counter based, so distinct stream ids give
//! independent sequences and a trial's randomness does not depend on which
//! thread runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Same seed, different stream.
    pub fn with_stream(&self, stream: u64) -> Self {
        Self { seed: self.seed, stream }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

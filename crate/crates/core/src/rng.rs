//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed and
//! addressed by a [`Substream`] id, so the links, the component tables and
//! each walk draw from disjoint, reproducible sequences of the same seed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent roles that draw from one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Substream {
    Links,
    Tables,
    Walk,
    Sampling,
}

impl Substream {
    fn id(self) -> u64 {
        match self {
            Substream::Links => 1,
            Substream::Tables => 2,
            Substream::Walk => 3,
            Substream::Sampling => 4,
        }
    }
}

/// A deterministic random stream. Not `Sync`; give each thread its own.
#[derive(Debug, Clone)]
pub struct RandomStream {
    inner: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, substream: Substream) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(substream.id());
        Self { inner }
    }

    /// A stream for ad-hoc use (tests, sampling helpers).
    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, Substream::Sampling)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// SplitMix64 finalizer. Bijective on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

//! Deterministic random substreams.
//!
//! Every simulated season draws from its own ChaCha8 stream, selected by the
//! iteration index on top of a shared master seed. A season's variates thus
//! depend only on `(master_seed, iteration)`, never on which worker ran it or
//! in which order, so parallel and sequential runs agree bit for bit.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RandomStream {
    inner: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_index);
        RandomStream { inner }
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

/// Mixes a scenario tag into a master seed (SplitMix64 finalizer), giving
/// unrelated seeds for scenarios that must be simulated independently.
pub fn derive_seed(master_seed: u64, tag: u64) -> u64 {
    let mut z = master_seed.wrapping_add(tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

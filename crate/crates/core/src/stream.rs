//! Seeded random substreams.
//!
//! Every random quantity in the crate is drawn from a [`RngStream`], a
//! `(seed, stream_id)` pair that maps onto one ChaCha8 keystream. Replicas
//! get distinct `stream_id`s, and independent parts of one experiment
//! (points, edges, walks, ...) get distinct seeds derived from a root seed
//! by label, so results never depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn root(seed: u64) -> Self {
        RngStream { seed, stream_id: 0 }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Named child stream. The label and the parent's `(seed, stream_id)`
    /// select the child seed; `index` becomes its stream id.
    pub fn substream(&self, label: &str, index: u64) -> RngStream {
        let mut h = fnv1a(label.as_bytes());
        h = splitmix64(h ^ self.seed);
        h = splitmix64(h ^ self.stream_id.rotate_left(17));
        RngStream { seed: h, stream_id: index }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

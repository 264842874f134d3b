use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A splittable seed for deterministic experiments.
///
/// The generator behind it (ChaCha8) is counter-based, so identical seeds
/// produce identical streams on every platform. `child` derives independent
/// sub-seeds by index, which lets a run hand each trial its own stream
/// without any coordination between workers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(u64);

impl Seed {
    pub const fn new(value: u64) -> Self {
        Seed(value)
    }

    pub const fn value(self) -> u64 {
        self.0
    }

    /// Derive the `index`-th child seed. Children of the same parent are
    /// decorrelated by a SplitMix64 finalizer, and the mapping is pure:
    /// the same `(parent, index)` always yields the same child.
    pub fn child(self, index: u64) -> Seed {
        // Offset by the golden-ratio increment so child(0) != parent.
        let x = self
            .0
            .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Seed(splitmix64(x))
    }

    /// A fresh generator positioned at the start of this seed's stream.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

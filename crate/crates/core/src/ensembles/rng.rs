use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Purpose ids that keep the pilot, estimation and main streams apart.
pub mod purpose {
    pub const MAIN: u64 = 0;
    pub const PILOT: u64 = 1;
    pub const MOMENTS: u64 = 2;
    pub const MEAN_ESTIMATE: u64 = 3;
    pub const COEFFICIENTS: u64 = 4;
}

/// Addresses one reproducible random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Generator for this stream under the main purpose.
    pub fn rng(&self) -> ChaCha8Rng {
        StreamFamily::new(self.seed, purpose::MAIN).rng(self.stream)
    }
}

/// A ChaCha8 key derived from `(seed, purpose)`; stream `k` of the family is
/// the same on every platform and independent of how streams are scheduled.
#[derive(Clone, Debug)]
pub struct StreamFamily {
    key: [u8; 32],
}

impl StreamFamily {
    pub fn new(seed: u64, purpose: u64) -> Self {
        let mut keygen = ChaCha8Rng::seed_from_u64(seed);
        keygen.set_stream(purpose);
        Self { key: keygen.random() }
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(stream);
        rng
    }
}

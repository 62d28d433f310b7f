//! Keyed random streams.
//!
//! Every random quantity in a realization (a point process, one association
//! choice, one link) is drawn from its own ChaCha stream whose seed is a hash
//! of `(master seed, trial, stream tag, entity ids)`. Results therefore do not
//! depend on thread count or evaluation order, and two runs that differ only
//! in one density reuse every other draw (common random numbers).

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Concrete generator handed out by [`TrialStreams`].
pub type StreamRng = ChaCha12Rng;

/// What a stream is used for. Part of the stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamTag {
    BsProcess = 1,
    UserProcess = 2,
    IrsProcess = 3,
    UserAssociation = 4,
    IrsAssociation = 5,
    Blockage = 6,
    DirectLink = 7,
    BsIrsLink = 8,
    IrsUserLink = 9,
    Auxiliary = 10,
}

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream factory for a single Monte-Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialStreams {
    master: u64,
    trial: u64,
}

impl TrialStreams {
    pub fn new(master: u64, trial: u64) -> Self {
        Self { master, trial }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn trial(&self) -> u64 {
        self.trial
    }

    /// Stream keyed by `tag` and up to two entity ids.
    pub fn stream(&self, tag: StreamTag, a: u64, b: u64) -> StreamRng {
        let mut state = self.master;
        for v in [self.trial, tag as u64, a, b] {
            state ^= v;
            state = splitmix64(&mut state);
        }
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        StreamRng::from_seed(seed)
    }
}

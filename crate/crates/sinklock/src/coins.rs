//! Deterministic fair coins keyed by (seed, round, edge index).
//!
//! Every engine that orients edges — the standalone orientation sampler, the
//! centralized round simulator, and the message-passing simulator — draws
//! from this schedule. A coin depends only on the key, never on who asks or
//! in what order, which is what makes centralized and distributed runs of
//! the same seed produce identical per-round orientations, and what lets a
//! trace be replayed exactly.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Counter-mode coin source: the seed keys the cipher, the round selects the
/// stream, and the edge index selects a bit position within the stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoinSchedule {
    seed: u64,
}

impl CoinSchedule {
    pub fn new(seed: u64) -> CoinSchedule {
        CoinSchedule { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn round_rng(&self, round: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(round);
        rng
    }

    /// The coin for one edge in one round, random access.
    pub fn coin(&self, round: u64, edge_index: usize) -> bool {
        let mut rng = self.round_rng(round);
        rng.set_word_pos(edge_index as u128 / 32);
        (rng.next_u32() >> (edge_index % 32)) & 1 == 1
    }

    /// All coins for edge indices `0..m` in one round. Pointwise identical
    /// to [`CoinSchedule::coin`], but one cipher setup for the whole round.
    pub fn round_coins(&self, round: u64, m: usize) -> Vec<bool> {
        let mut rng = self.round_rng(round);
        let mut coins = Vec::with_capacity(m);
        let mut remaining = m;
        while remaining > 0 {
            let word = rng.next_u32();
            let take = remaining.min(32);
            for bit in 0..take {
                coins.push((word >> bit) & 1 == 1);
            }
            remaining -= take;
        }
        coins
    }
}

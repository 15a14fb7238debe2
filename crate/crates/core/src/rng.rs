//! Counter-based deterministic pseudo-randomness.
//!
//! All sampling in this crate flows from a single `u64` seed through
//! SplitMix64 streams so that runs are reproducible bit-for-bit and so that
//! ports to other languages can regenerate identical sample sets.
//!
//! Stream derivation, exactly:
//!
//! * `GAMMA = 0x9E37_79B9_7F4A_7C15`
//! * stream `i` of seed `s` is the SplitMix64 generator with initial state
//!   `mix(s ^ (i + 1) * GAMMA)` (wrapping arithmetic), where `mix` is the
//!   SplitMix64 output permutation below.
//! * `next_u64`: `state += GAMMA; return mix(state)`.
//! * `below(b)` is `next_u64() % b`; the modulo bias is irrelevant for test
//!   input generation and keeps the definition portable.

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output permutation.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// The `index`-th independent stream of `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        SplitMix64 {
            state: mix(seed ^ index.wrapping_add(1).wrapping_mul(GAMMA)),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform-ish value in `[0, bound)`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    pub fn letter(&mut self, alphabet: usize) -> u8 {
        self.below(alphabet as u64) as u8
    }
}

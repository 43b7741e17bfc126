//! Seeded, stream-splittable pseudo-random generator.
//!
//! The generator is SplitMix64 (Steele, Lea and Flood, 2014): a 64-bit Weyl sequence with
//! increment `GAMMA` passed through the `mix64` finalizer. Streams are keyed by a
//! `(master_seed, stream_index)` pair; the initial state is
//!
//! ```text
//! state0 = mix64(master_seed ^ mix64(stream_index + GAMMA))
//! ```
//!
//! so every trial of an experiment owns an independent stream whose output does not depend on
//! which worker runs it. All arithmetic is wrapping `u64`, so output is identical on every
//! platform.

/// Weyl increment, `floor(2^64 / phi)` rounded to odd.
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
/// First multiplier of the SplitMix64 finalizer.
pub const MIX_MUL_1: u64 = 0xBF58_476D_1CE4_E5B9;
/// Second multiplier of the SplitMix64 finalizer.
pub const MIX_MUL_2: u64 = 0x94D0_49BB_1331_11EB;

/// The SplitMix64 output finalizer (a bijection on `u64`).
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    state: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let state = mix64(master_seed ^ mix64(stream_index.wrapping_add(GAMMA)));
        RngStream {
            master_seed,
            stream_index,
            state,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// An independent stream derived from this one's key; used to give sub-tasks (for
    /// example the two samplers of a dominance check) disjoint streams.
    pub fn fork(&self, salt: u64) -> RngStream {
        RngStream::new(mix64(self.master_seed ^ salt.wrapping_mul(GAMMA)), self.stream_index)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform integer in `0..bound` (Lemire's multiply-and-reject, unbiased).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below() needs a positive bound");
        let mut m = (self.next_u64() as u128) * (bound as u128);
        let mut low = m as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                m = (self.next_u64() as u128) * (bound as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    pub fn below_usize(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// Uniform `f64` in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Partial Fisher-Yates: afterwards `buf[..m]` is a uniformly random ordered selection
    /// of `m` distinct entries of `buf`. The rest of `buf` holds the remaining entries.
    pub fn partial_shuffle<T>(&mut self, buf: &mut [T], m: usize) {
        assert!(m <= buf.len());
        for i in 0..m {
            let j = i + self.below_usize(buf.len() - i);
            buf.swap(i, j);
        }
    }

    /// `m` distinct values from `0..n` in uniformly random order.
    pub fn sample_distinct(&mut self, n: usize, m: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        self.partial_shuffle(&mut pool, m);
        pool.truncate(m);
        pool
    }
}

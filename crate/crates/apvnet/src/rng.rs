//! Portable seeded randomness.
//!
//! Every random choice in this crate (train/test splits, weight initialization,
//! epoch shuffles, synthetic fixtures) flows through [`SplitMix64`] so that runs
//! are bit-identical across platforms and can be reproduced by independent
//! implementations. The generator is Steele, Lea & Flood's SplitMix64:
//!
//! ```text
//! state := state + 0x9E3779B97F4A7C15                 (wrapping)
//! z := state
//! z := (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9         (wrapping)
//! z := (z XOR (z >> 27)) * 0x94D049BB133111EB         (wrapping)
//! output := z XOR (z >> 31)
//! ```
//!
//! Derived quantities are also pinned here:
//! - `next_f64` takes the top 53 bits: `(output >> 11) * 2^-53`, uniform in `[0, 1)`.
//! - `next_below(n)` uses rejection sampling (retry while `output >= 2^64 - 2^64 mod n`,
//!   then reduce mod `n`), so index draws are unbiased and portable.
//! - `shuffle` is a Fisher-Yates pass from the last index down, swapping `i` with
//!   `next_below(i + 1)`.

/// SplitMix64 pseudo-random generator. See the module docs for the exact
/// update rule; this is the single source of randomness in the crate.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform `f64` in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform `f64` in `[lo, hi)`.
    pub fn next_in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Unbiased integer in `[0, n)` via rejection sampling.
    ///
    /// Panics if `n == 0`.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "next_below requires n > 0");
        let threshold = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < threshold {
                return v % n;
            }
        }
    }

    /// Standard normal deviate (Box-Muller, always consumes two uniforms).
    pub fn next_gaussian(&mut self) -> f64 {
        // u1 is kept away from zero so ln(u1) stays finite.
        let u1 = (self.next_u64() >> 11).max(1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Derives an independent sub-seed from a master seed.
///
/// The sub-seed for `stream` is the `(stream + 1)`-th SplitMix64 output of a
/// generator seeded with `master`. Stream numbers are fixed per use site (see
/// [`crate::experiment::seeds`]) so adding a consumer never perturbs existing ones.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = SplitMix64::new(master);
    let mut out = rng.next_u64();
    for _ in 0..stream {
        out = rng.next_u64();
    }
    out
}

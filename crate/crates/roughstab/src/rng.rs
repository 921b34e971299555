//! Seeded random streams.
//!
//! Every stochastic quantity in this crate is drawn from a splitmix64 stream
//! keyed by a `(seed, stream)` pair, so runs are bitwise reproducible across
//! platforms and independent streams can be handed to parallel workers.
//! Gaussian variates come from the Box-Muller transform.

/// splitmix64 generator (Vigna's constants). One instance per stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Derives an independent stream from a base seed. The stream id is
    /// scrambled through one mixing step so that consecutive ids do not
    /// produce overlapping state sequences.
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut base = Self::new(seed);
        let a = base.next_u64();
        let mut sub = Self::new(a ^ stream.wrapping_mul(0xa3ec_6476_5935_9acd).wrapping_add(1));
        // burn one output so stream 0 does not alias the base sequence
        sub.next_u64();
        sub
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw strictly inside (0, 1); safe as a Box-Muller input.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }
}

/// Standard Gaussian stream: Box-Muller over a splitmix64 source, caching
/// the second variate of each pair.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            rng: SplitMix64::stream(seed, stream),
            spare: None,
        }
    }

    pub fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.rng.next_open01();
        let u2 = self.rng.next_open01();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Maps independent seeds across rayon workers; output order matches the
/// input seed order, so reductions stay deterministic.
pub fn par_map_seeds<T, F>(seeds: &[u64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    use rayon::prelude::*;
    seeds.par_iter().map(|&s| f(s)).collect()
}

//! Counter-based random number generation.
//!
//! Every draw is addressed by `(seed, stream, counter)` and computed by a
//! splitmix64-style finalizer, so any value can be regenerated in isolation:
//! refinement, parallel replication and restarts all see the same numbers
//! regardless of evaluation order.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const STREAM_SALT: u64 = 0x6a09_e667_f3bc_c909;
const DERIVE_SALT: u64 = 0xbb67_ae85_84ca_a73b;

/// splitmix64 finalizer: full-avalanche bijection on u64.
#[inline(always)]
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent child seed, e.g. one per replicate.
#[inline]
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    mix(mix(seed ^ DERIVE_SALT) ^ salt.wrapping_mul(GOLDEN))
}

/// Stream ids used across the crate. Streams of one seed are independent.
pub mod streams {
    /// Brownian increments on the right of the origin, counter = tick.
    pub const RIGHT_INCREMENTS: u64 = 0;
    /// Brownian increments on the left of the origin, counter = |tick| - 1.
    pub const LEFT_INCREMENTS: u64 = 1;
    /// Exponential sampling times, decoupled from path randomness.
    pub const EXPONENTIAL: u64 = 2;
    /// Sign attachment for noise samples.
    pub const SIGNS: u64 = 3;
    /// Extra increments consumed by the refined last-zero detector.
    pub const DETECTOR: u64 = 4;
    /// Bridge midpoint displacement; stream = REFINE_BASE + target level.
    pub const REFINE_BASE: u64 = 32;
}

/// Map a signed tick to a counter (zigzag keeps small ticks small).
#[inline(always)]
pub fn tick_counter(tick: i64) -> u64 {
    ((tick << 1) ^ (tick >> 63)) as u64
}

/// Stateless generator for one `(seed, stream)` pair.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        CounterRng {
            key: mix(mix(seed ^ STREAM_SALT) ^ stream.wrapping_mul(GOLDEN)),
        }
    }

    #[inline(always)]
    pub fn u64_at(&self, counter: u64) -> u64 {
        mix(self.key.wrapping_add(counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in the open interval (0, 1).
    #[inline(always)]
    pub fn uniform_at(&self, counter: u64) -> f64 {
        ((self.u64_at(counter) >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal pair by Box-Muller; consumes counters (2k, 2k+1).
    #[inline(always)]
    pub fn normal_pair_at(&self, pair_index: u64) -> (f64, f64) {
        let u1 = self.uniform_at(2 * pair_index);
        let u2 = self.uniform_at(2 * pair_index + 1);
        let r = (-2.0 * u1.ln()).sqrt();
        let th = std::f64::consts::TAU * u2;
        (r * th.cos(), r * th.sin())
    }

    /// Standard normal addressed by index; component `k % 2` of pair `k / 2`.
    #[inline(always)]
    pub fn normal_at(&self, index: u64) -> f64 {
        let pair = self.normal_pair_at(index / 2);
        if index.is_multiple_of(2) {
            pair.0
        } else {
            pair.1
        }
    }

    /// Exponential draw of rate `lambda` by inverse CDF; returns `(e, u)`
    /// with `e = -ln(u) / lambda` so callers can log the uniform.
    #[inline]
    pub fn exp_at(&self, counter: u64, lambda: f64) -> (f64, f64) {
        let u = self.uniform_at(counter);
        (-u.ln() / lambda, u)
    }
}

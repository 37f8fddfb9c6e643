//! Seeded randomness. Every stochastic operation in the crate draws from a
//! [`ChaCha12Rng`] built here, so identical seeds give bit-identical runs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Portable deterministic generator used throughout the crate.
pub type DetRng = ChaCha12Rng;

pub fn rng_from_seed(seed: u64) -> DetRng {
    DetRng::seed_from_u64(seed)
}

/// Derive a decorrelated sub-seed for an independent stream (splitmix64 mix).
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Normal(mean, stddev) truncated to mean ± `bound_sigmas`·stddev, by rejection.
pub fn truncated_normal(rng: &mut impl Rng, mean: f64, stddev: f64, bound_sigmas: f64) -> f64 {
    loop {
        let z = standard_normal(rng);
        if z.abs() <= bound_sigmas {
            return mean + stddev * z;
        }
    }
}

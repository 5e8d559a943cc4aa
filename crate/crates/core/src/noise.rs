//! Seeded randomness: a splittable seed scheme and the uniform noise source.
//!
//! All randomness in the crate flows through explicit 64-bit seeds; there is
//! no global RNG. Derived seeds are computed with a SplitMix64 mix so that
//! concurrent trials can own disjoint streams while reruns stay bit-identical.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::modular::ModularWeights;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministically derives an independent child seed for stream `tag`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix(seed ^ mix(tag.wrapping_add(1)))
}

/// A fresh deterministic generator for the given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws `n` i.i.d. weights uniform on `[-t, t]`. Identical `(n, t, seed)`
/// yields bit-identical output.
pub fn uniform_noise(n: usize, t: f64, seed: u64) -> Result<ModularWeights> {
    if !(t >= 0.0) {
        return Err(Error::NegativeScale { t });
    }
    let mut rng = rng_from_seed(seed);
    let w = (0..n)
        .map(|_| {
            let u: f64 = rng.gen(); // [0, 1)
            t * (2.0 * u - 1.0)
        })
        .collect();
    Ok(ModularWeights::new(w))
}

/// One standard normal draw (Box-Muller; consumes two uniforms).
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

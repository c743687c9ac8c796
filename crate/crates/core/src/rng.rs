//! Seeded, portable randomness.
//!
//! All sampling goes through ChaCha8 keyed by a 64-bit seed. Concurrent
//! trials use independent substreams selected by a counter, so any execution
//! order yields identical aggregate results.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Substream `index` of the generator keyed by `seed`.
pub fn substream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian: re and im each N(0, 1/2), so E|z|² = 1.
pub fn complex_gaussian(rng: &mut SeededRng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

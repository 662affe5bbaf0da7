//! Counter-keyed Gaussian deviates.
//!
//! Every random entry is a pure function of `(seed, stream)`: a fresh
//! ChaCha8 generator is positioned on its own stream for each key, so the
//! value of an entry never depends on how many other entries were drawn
//! before it or on which thread drew them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Standard complex Gaussian `X + iY`, `X, Y ~ N(0, 1)` independent, keyed by
/// `(seed, row, col)`.
pub fn gaussian_entry(seed: u64, row: usize, col: usize) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((row as u64) << 32) | (col as u64 & 0xffff_ffff));
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    (x, y)
}

/// Derives an independent child seed from a parent seed and a tuple of
/// counters (splitmix64 finaliser chained over the parts).
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix(seed ^ 0x9e37_79b9_7f4a_7c15);
    for &p in parts {
        h = splitmix(h ^ splitmix(p.wrapping_add(0x632b_e59b_d9b4_e019)));
    }
    h
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

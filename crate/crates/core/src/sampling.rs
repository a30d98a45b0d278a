//! Seeded pseudorandom inputs shared by the numerical cross-checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::rational::{ratio, Rational};

pub const DEFAULT_SEED: u64 = 0xA11CE;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    ratio(rng.gen_range(-1000..=1000), rng.gen_range(1..=97))
}

pub fn random_rational_point<R: Rng>(rng: &mut R, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| random_rational(rng)).collect()
}

pub fn random_rational_points(seed: u64, dim: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| random_rational_point(&mut rng, dim)).collect()
}

/// Gaussian-distributed float vector with the given scale.
pub fn random_float_point<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

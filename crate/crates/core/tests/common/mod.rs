#![allow(dead_code)]

use crescendo_core::{GaussianMeasure, LinearSystem};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `M M^T + 0.5 I` with `M` uniform in `[-1, 1]`.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    &m * m.transpose() + DMatrix::identity(n, n) * 0.5
}

pub fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> GaussianMeasure {
    let split = rng.gen_range(1..n);
    GaussianMeasure::centered(random_spd(rng, n), split).unwrap()
}

/// Generator with entries in `[-1, 1]` shifted by `-I`, and a random initial state.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize) -> LinearSystem {
    let r = DMatrix::from_fn(n, n, |i, j| rng.gen_range(-1.0..1.0) - if i == j { 1.0 } else { 0.0 });
    let u0 = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
    LinearSystem::from_real(&r, &u0).unwrap()
}

/// Box-Muller sample.
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

//! Seeded random vectors for the sampled estimators and experiments.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::space::SpaceSpec;

/// Deterministic per-stream generator: one stream per (seed, index).
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Gaussian direction normalized to unit length in the norm of `spec`.
pub fn unit_direction<R: Rng + ?Sized>(spec: &SpaceSpec, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..spec.dim()).map(|_| rng.sample(StandardNormal)).collect();
        let n = spec.norm_of(&v);
        if n > 1e-12 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// Sparse direction: each coordinate survives with probability one half (at
/// least one survives). Sparse inputs reach faces and crossing indices that
/// dense Gaussians rarely hit.
pub fn sparse_unit_direction<R: Rng + ?Sized>(spec: &SpaceSpec, rng: &mut R) -> Vec<f64> {
    let d = spec.dim();
    loop {
        let keep = rng.random_range(0..d);
        let v: Vec<f64> = (0..d)
            .map(|j| if j == keep || rng.random_bool(0.5) { rng.sample(StandardNormal) } else { 0.0 })
            .collect();
        let n = spec.norm_of(&v);
        if n > 1e-12 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// Vector of norm `radius` in `spec`, dense or sparse with equal odds.
pub fn vector_with_norm<R: Rng + ?Sized>(spec: &SpaceSpec, radius: f64, rng: &mut R) -> Vec<f64> {
    let dir = if rng.random_bool(0.5) { unit_direction(spec, rng) } else { sparse_unit_direction(spec, rng) };
    dir.into_iter().map(|a| a * radius).collect()
}

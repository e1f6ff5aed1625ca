use rand::Rng;
use rayon::prelude::*;

use super::RetractionHandle;
use crate::error::{Error, Result};
use crate::moduli::ModulusCurve;
use crate::sampling::{stream, vector_with_norm};

/// Empirical `ω̂_φ(t)`: for each grid `t`, the largest `‖φ(g) − φ(g + t u)‖`
/// over `samples` pairs with `‖g‖ ∈ [0.9, 1.5]` and `‖u‖ = 1`, dense or sparse.
///
/// The result is a running maximum over the grid, so it is a lower bound for
/// the true modulus at every grid point. Grid point `i` draws from stream `i`.
pub fn omega_estimate(handle: &RetractionHandle, t_grid: &[f64], seed: u64, samples: usize) -> Result<ModulusCurve> {
    if samples == 0 {
        return Err(Error::InvalidArgument("omega_estimate needs at least one sample".into()));
    }
    let space = handle.space();
    let dual = space.dual_spec();
    let per_t: Vec<f64> = t_grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| -> Result<f64> {
            let mut rng = stream(seed, i as u64);
            let mut best = 0.0_f64;
            for _ in 0..samples {
                let radius = rng.random_range(0.9..=1.5);
                let g = space.dual(vector_with_norm(dual, radius, &mut rng))?;
                let u = space.dual(vector_with_norm(dual, 1.0, &mut rng))?;
                let h = g.add_scaled(t, &u)?;
                best = best.max(handle.apply(&g)?.distance(&handle.apply(&h)?)?);
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    let mut running = 0.0_f64;
    let values = per_t
        .into_iter()
        .map(|v| {
            running = running.max(v);
            running
        })
        .collect();
    ModulusCurve::new(t_grid.to_vec(), values)
}

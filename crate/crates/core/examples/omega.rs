//! Empirical modulus of continuity against the declared bound.

use dualball::moduli::default_t_grid;
use dualball::retract::{omega_estimate, RetractionHandle};
use dualball::space::{Space, SpaceSpec};

fn main() -> dualball::Result<()> {
    let grid = default_t_grid();
    for spec in [SpaceSpec::sup(4)?, SpaceSpec::lp(2.0, 4)?] {
        let handle = RetractionHandle::truncation(&Space::new(spec)?)?;
        let omega = omega_estimate(&handle, &grid, 1, 2000)?;
        println!("truncation on the dual of {}", handle.space().spec());
        for (t, w) in grid.iter().zip(omega.values()).step_by(8) {
            println!("  t = {t:<8.5} omega ~ {w:.6}  bound {:.6}", handle.modulus_bound(*t));
        }
    }
    Ok(())
}

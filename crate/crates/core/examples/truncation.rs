//! Truncation retraction on the dual of ℓ∞³ (that is, ℓ₁³) and of ℓ₂³.

use dualball::retract::{radial_retract, truncation_retract_detailed};
use dualball::space::{Space, SpaceSpec};

fn main() -> dualball::Result<()> {
    for spec in [SpaceSpec::sup(3)?, SpaceSpec::lp(2.0, 3)?] {
        let space = Space::new(spec)?;
        println!("dual of {}", space.spec());
        for coords in [vec![0.2, -0.3, 0.1], vec![0.5, -0.75, 0.4], vec![2.0, 1.0, 1.0]] {
            let f = space.dual(coords)?;
            let out = truncation_retract_detailed(&f)?;
            let crossing = out.crossing.map_or("inside".to_string(), |n| format!("n = {n}, t = {:.6}", out.t));
            println!(
                "  {:?} (norm {:.3}) -> {:?} [{crossing}]; radial gives {:?}",
                f.coords(),
                f.norm(),
                out.value.coords(),
                radial_retract(&f).coords()
            );
        }
    }
    Ok(())
}

//! Blended retraction on the dual of a c₀-sum of Euclidean blocks.

use dualball::retract::{c0_sum_retract_detailed, hahn_banach_min_extension, SubspaceChain};
use dualball::space::{Space, SpaceSpec};

fn main() -> dualball::Result<()> {
    let spec = SpaceSpec::c0_sum(vec![SpaceSpec::lp(2.0, 2)?, SpaceSpec::lp(2.0, 2)?])?;
    let space = Space::new(spec)?;
    let chain = SubspaceChain::new(&space)?;
    println!("chain order on {}: {:?}", space.spec(), chain.order());
    for step in chain.steps() {
        println!("  enumeration {} -> component {}, coordinate {}", step.enumeration, step.component, step.coordinate);
    }
    let ext = hahn_banach_min_extension(&space, &[0, 2], &[0.3, -0.4])?;
    println!("min-norm extension of (e0: 0.3, e2: -0.4): {:?}", ext.coords());
    for coords in [vec![0.3, 0.1, 0.2, 0.1], vec![0.9, 0.6, 0.5, 0.4], vec![1.5, 0.0, 0.2, 0.1]] {
        let f = space.dual(coords)?;
        let (image, blend) = c0_sum_retract_detailed(&chain, &f)?;
        println!("  {:?} (norm {:.3}) -> {:?}, norm {:.6}, blend {blend:?}", f.coords(), f.norm(), image.coords(), image.norm());
    }
    for t in [1e-4, 1e-2, 0.1] {
        println!("  continuity bound at t = {t}: {:.4}", chain.continuity_bound(t)?);
    }
    Ok(())
}
